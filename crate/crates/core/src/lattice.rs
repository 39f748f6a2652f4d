//! Even integer lattices, their discriminant forms `(L^∨/L, q)`, induced
//! actions of isometries, and the gluing criterion for isometries of
//! orthogonal pieces of a unimodular overlattice.

use crate::abelian::FiniteAbelianGroup;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::matrix::{determinant, mat_mul, smith_normal_form, transpose, IntMatrix};
use num_traits::Zero;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct IntegerLattice {
    gram: IntMatrix,
}

impl IntegerLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "Gram matrix must be square, got {n} rows of unequal length"
            )));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Shape(format!(
                        "Gram matrix is not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        Ok(IntegerLattice { gram })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn determinant(&self) -> i128 {
        determinant(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[i][i] % 2 == 0)
    }

    pub fn negated(&self) -> IntegerLattice {
        IntegerLattice {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|x| -x).collect())
                .collect(),
        }
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, o: &IntegerLattice) -> IntegerLattice {
        let (n, m) = (self.rank(), o.rank());
        let mut g = vec![vec![0; n + m]; n + m];
        for i in 0..n {
            g[i][..n].copy_from_slice(&self.gram[i]);
        }
        for i in 0..m {
            g[n + i][n..].copy_from_slice(&o.gram[i]);
        }
        IntegerLattice { gram: g }
    }

    pub fn pairing(&self, x: &[i128], y: &[i128]) -> i128 {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| x[i] * self.gram[i][j] * y[j]).sum::<i128>())
            .sum()
    }

    /// `f^T G f = G`, with `f` acting on coordinate columns.
    pub fn is_isometry(&self, f: &IntMatrix) -> bool {
        let n = self.rank();
        f.len() == n
            && f.iter().all(|r| r.len() == n)
            && mat_mul(&mat_mul(&transpose(f), &self.gram), f) == self.gram
            && determinant(f).abs() == 1
    }

    pub fn discriminant_form(&self) -> Result<DiscriminantForm> {
        if !self.is_even() {
            return Err(Error::OddLattice);
        }
        if self.determinant() == 0 {
            return Err(Error::DegenerateLattice);
        }
        let n = self.rank();
        let s = smith_normal_form(&self.gram);
        let diag = s.diagonal();
        let keep: Vec<usize> = (0..n).filter(|&i| diag[i] != 1).collect();
        // generator i is (column i of V) / d_i, a dual vector
        let generators: Vec<Vec<Rational>> = keep
            .iter()
            .map(|&i| (0..n).map(|k| Rational::new(s.v[k][i], diag[i])).collect())
            .collect();
        let gram_q: Vec<Vec<Rational>> = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        let pair = |x: &[Rational], y: &[Rational]| -> Rational {
            let mut acc = Rational::zero();
            for i in 0..n {
                for j in 0..n {
                    acc += x[i] * gram_q[i][j] * y[j];
                }
            }
            acc
        };
        // diagonal entries matter mod 2, the others mod 1
        let gen_gram = generators
            .iter()
            .enumerate()
            .map(|(i, x)| {
                generators
                    .iter()
                    .enumerate()
                    .map(|(j, y)| mod_rational(pair(x, y), if i == j { 2 } else { 1 }))
                    .collect()
            })
            .collect();
        let u_rows: IntMatrix = keep.iter().map(|&i| s.u[i].clone()).collect();
        Ok(DiscriminantForm {
            group: FiniteAbelianGroup::from_chain(keep.iter().map(|&i| diag[i] as i64).collect()),
            gen_gram,
            generators,
            coord_map: mat_mul(&u_rows, &self.gram),
        })
    }

    fn induced(&self, form: &DiscriminantForm, f: &IntMatrix) -> Result<DiscFormIsometry> {
        if !self.is_isometry(f) {
            return Err(Error::NotAnIsometry);
        }
        let n = self.rank();
        let columns = form
            .generators
            .iter()
            .map(|x| {
                let fx: Vec<Rational> = (0..n)
                    .map(|i| (0..n).map(|k| Rational::from_integer(f[i][k]) * x[k]).sum())
                    .collect();
                form.dual_coordinates(&fx)
            })
            .collect();
        Ok(DiscFormIsometry {
            form: form.clone(),
            columns,
        })
    }

    /// Action of the isometry `f` on the discriminant group.
    pub fn induced_disc_map(&self, f: &IntMatrix) -> Result<DiscFormIsometry> {
        let form = self.discriminant_form()?;
        self.induced(&form, f)
    }
}

/// `(A, q)` with `A = L^∨/L` on the invariant generators of the Smith form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantForm {
    group: FiniteAbelianGroup,
    /// Pairings `(g_i, g_j)` of the chosen dual representatives.
    gen_gram: Vec<Vec<Rational>>,
    generators: Vec<Vec<Rational>>,
    coord_map: IntMatrix,
}

fn mod_rational(x: Rational, m: i128) -> Rational {
    let m = Rational::from_integer(m);
    let k = (x / m).floor();
    x - k * m
}

impl DiscriminantForm {
    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn order(&self) -> u128 {
        self.group.order()
    }

    /// Dual-basis representatives of the generators, in lattice coordinates.
    pub fn generator_vectors(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Group coordinates of a vector of `L^∨` given in lattice coordinates.
    pub fn dual_coordinates(&self, x: &[Rational]) -> Vec<i64> {
        let coords: Vec<i64> = self
            .coord_map
            .iter()
            .zip(self.group.divisors())
            .map(|(row, &d)| {
                let c: Rational = row
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| Rational::from_integer(a) * b)
                    .sum();
                assert!(c.is_integer(), "not a dual vector");
                c.to_integer().rem_euclid(d as i128) as i64
            })
            .collect();
        coords
    }

    /// `sum_ij x_i y_j (g_i, g_j)` reduced mod `m`, keeping intermediate values small.
    fn pair_mod(&self, x: &[i64], y: &[i64], m: i128) -> Rational {
        let k = self.group.rank();
        let mut acc = Rational::zero();
        for i in 0..k {
            for j in 0..k {
                let r = self.gen_gram[i][j];
                let c = (x[i] as i128 * y[j] as i128).rem_euclid(m * r.denom());
                acc = mod_rational(acc + Rational::from_integer(c) * r, m);
            }
        }
        acc
    }

    /// `q(x)` in `[0, 2)`.
    pub fn q(&self, x: &[i64]) -> Rational {
        self.pair_mod(x, x, 2)
    }

    /// `b(x, y)` in `[0, 1)`.
    pub fn b(&self, x: &[i64], y: &[i64]) -> Rational {
        self.pair_mod(x, y, 1)
    }

    fn unit(&self, i: usize) -> Vec<i64> {
        let mut e = self.group.zero();
        e[i] = 1;
        e
    }

    /// `q` on the generators.
    pub fn generator_q(&self) -> Vec<Rational> {
        (0..self.group.rank())
            .map(|i| self.q(&self.unit(i)))
            .collect()
    }

    /// Whether `columns` (images of the generators of `self`) define a group
    /// isomorphism `self -> target` with `q_target(h x) = sign * q(x)`.
    pub fn is_isomorphism_to(
        &self,
        target: &DiscriminantForm,
        columns: &[Vec<i64>],
        sign: i128,
    ) -> bool {
        let k = self.group.rank();
        if columns.len() != k || columns.iter().any(|c| c.len() != target.group.rank()) {
            return false;
        }
        if self.order() != target.order() {
            return false;
        }
        // well defined: d_i * h(g_i) = 0
        for (i, c) in columns.iter().enumerate() {
            if target.group.scale(c, self.group.divisors()[i]) != target.group.zero() {
                return false;
            }
        }
        if target.group.subgroup(columns).structure.order() != target.order() {
            return false;
        }
        let s = Rational::from_integer(sign);
        for i in 0..k {
            if target.q(&columns[i]) != mod_rational(s * self.q(&self.unit(i)), 2) {
                return false;
            }
            for j in 0..i {
                if target.b(&columns[i], &columns[j])
                    != mod_rational(s * self.b(&self.unit(i), &self.unit(j)), 1)
                {
                    return false;
                }
            }
        }
        true
    }

    /// All isomorphisms `(self, -q) -> (target, q_target)`, as generator images.
    pub fn anti_isometries(&self, target: &DiscriminantForm) -> Vec<Vec<Vec<i64>>> {
        if self.order() != target.order() {
            return vec![];
        }
        let elems = target.group.elements();
        let k = self.group.rank();
        let mut out = vec![];
        let mut current: Vec<Vec<i64>> = vec![];
        fn rec(
            s: &DiscriminantForm,
            t: &DiscriminantForm,
            elems: &[Vec<i64>],
            k: usize,
            current: &mut Vec<Vec<i64>>,
            out: &mut Vec<Vec<Vec<i64>>>,
        ) {
            let i = current.len();
            if i == k {
                if s.is_isomorphism_to(t, current, -1) {
                    out.push(current.clone());
                }
                return;
            }
            let gi = s.unit(i);
            let want_q = mod_rational(-s.q(&gi), 2);
            for e in elems {
                if t.q(e) != want_q || t.group.element_order(e) != s.group.divisors()[i] {
                    continue;
                }
                if (0..i).any(|j| t.b(e, &current[j]) != mod_rational(-s.b(&gi, &s.unit(j)), 1)) {
                    continue;
                }
                current.push(e.clone());
                rec(s, t, elems, k, current, out);
                current.pop();
            }
        }
        rec(self, target, &elems, k, &mut current, &mut out);
        out
    }
}

/// An automorphism of a discriminant form, given by the images of its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscFormIsometry {
    form: DiscriminantForm,
    columns: Vec<Vec<i64>>,
}

impl DiscFormIsometry {
    pub fn identity(form: &DiscriminantForm) -> Self {
        DiscFormIsometry {
            form: form.clone(),
            columns: (0..form.group.rank()).map(|i| form.unit(i)).collect(),
        }
    }

    pub fn form(&self) -> &DiscriminantForm {
        &self.form
    }

    /// Images of the generators.
    pub fn columns(&self) -> &[Vec<i64>] {
        &self.columns
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.form.group.apply(&self.columns, x)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(&self.form)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &DiscFormIsometry) -> DiscFormIsometry {
        DiscFormIsometry {
            form: self.form.clone(),
            columns: o.columns.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn inverse(&self) -> DiscFormIsometry {
        let mut prev = Self::identity(&self.form);
        let mut cur = self.clone();
        while !cur.is_identity() {
            prev = cur.clone();
            cur = cur.compose(self);
        }
        prev
    }

    pub fn preserves_q(&self) -> bool {
        self.form.is_isomorphism_to(&self.form, &self.columns, 1)
    }
}

/// Whether `f_N ⊕ f_T` extends across the overlattice glued along `ident`,
/// an isomorphism `(A_T, -q_T) -> (A_N, q_N)` given by generator images:
/// holds iff `f_N ∘ ident = ident ∘ f_T`.
pub fn glue_check(
    f_n: &DiscFormIsometry,
    f_t: &DiscFormIsometry,
    ident: &[Vec<i64>],
) -> Result<bool> {
    if !f_t.form.is_isomorphism_to(&f_n.form, ident, -1) {
        return Err(Error::IncompatibleForms);
    }
    let a_n = &f_n.form.group;
    for (i, col) in ident.iter().enumerate() {
        // f_N(ident(g_i)) vs ident(f_T(g_i))
        let lhs = f_n.apply(col);
        let rhs = a_n.apply(ident, &f_t.columns[i]);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
