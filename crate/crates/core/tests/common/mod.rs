//! Brute-force reference computations shared by the integration tests.
//!
//! Nothing here calls the class group, ray class or discriminant-form
//! algorithms under test; only ideal multiplication, conjugation and
//! Hermite bases are taken from the library.

#![allow(dead_code)]

use k3cm::lattice::{glue_check, IntegerLattice};
use k3cm::matrix::IntMatrix;
use k3cm::quadfield::{ImaginaryQuadraticField, Integral, OIdeal};
use k3cm::rayclass::RayClassGroup;
use k3cm::{Rational, Result};
use num_integer::Integer;
use std::collections::{HashMap, HashSet};

pub fn field(d: i64) -> ImaginaryQuadraticField {
    ImaginaryQuadraticField::new(d).unwrap()
}

fn n0(d: i128) -> i128 {
    (d * d - d) / 4
}

pub fn norm(d: i128, (x, y): Integral) -> i128 {
    x * x + d * x * y + n0(d) * y * y
}

pub fn mul(d: i128, (a, b): Integral, (c, e): Integral) -> Integral {
    // w^2 = d w - n0
    (a * c - n0(d) * b * e, a * e + b * c + d * b * e)
}

fn isqrt(n: i128) -> Option<i128> {
    if n < 0 {
        return None;
    }
    let r = (n as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).find(|&s| s >= 0 && s * s == n)
}

/// Roots of unity by search over elements of norm 1.
pub fn units(d: i128) -> Vec<Integral> {
    let mut out = vec![];
    for y in -2..=2 {
        for x in -4..=4 {
            if norm(d, (x, y)) == 1 {
                out.push((x, y));
            }
        }
    }
    out
}

/// Every integral ideal of norm at most `bound`, ordered by norm.
pub fn ideals_up_to(e: &ImaginaryQuadraticField, bound: i128) -> Vec<OIdeal> {
    let d = e.discriminant() as i128;
    let mut out = vec![];
    for c in 1i128.. {
        if c * c > bound {
            break;
        }
        for a in 1..=bound / (c * c) {
            for b in 0..a {
                if norm(d, (b, 1)) % a == 0 {
                    out.push(OIdeal::from_triple(e, 1, a, b, c).unwrap());
                }
            }
        }
    }
    out.sort_by_key(|i| (i.norm_int(), i.triple()));
    out
}

/// An element of the integral ideal `j` with norm `n`, by solving
/// `(2x + dy)^2 = 4n + d y^2` over the allowed `y`.
pub fn element_of_norm(d: i128, j: &OIdeal, n: i128) -> Option<Integral> {
    let [(p, _), (q, r)] = j.scaled_basis();
    let ymax = isqrt_floor(4 * n / -d);
    for t in 0..=ymax / r {
        for t in [t, -t] {
            let y = t * r;
            let Some(z) = isqrt(4 * n + d * y * y) else {
                continue;
            };
            for z in [z, -z] {
                if (z - d * y) % 2 != 0 {
                    continue;
                }
                let x = (z - d * y) / 2;
                if (x - t * q).rem_euclid(p) == 0 {
                    return Some((x, y));
                }
            }
        }
    }
    None
}

fn isqrt_floor(n: i128) -> i128 {
    let mut r = (n.max(0) as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Whether `a · conj(b)` has an element of norm `Nm(a) Nm(b)`.
pub fn same_class(e: &ImaginaryQuadraticField, a: &OIdeal, b: &OIdeal) -> bool {
    let d = e.discriminant() as i128;
    let prod = a.mul(&b.conj(e), e).unwrap();
    element_of_norm(d, &prod, a.norm_int() * b.norm_int()).is_some()
}

fn reduce(basis: [Integral; 2], (x, y): Integral) -> Integral {
    let [(p, _), (q, r)] = basis;
    let k = y.div_euclid(r);
    ((x - k * q).rem_euclid(p), y - k * r)
}

/// The ideals of norm at most `bound` with their brute-force ideal classes.
pub struct FieldOracle {
    pub field: ImaginaryQuadraticField,
    pub d: i128,
    pub ideals: Vec<OIdeal>,
    pub class_of: Vec<usize>,
    pub h: usize,
    units: Vec<Integral>,
    /// Generators of `J · conj(R)` keyed by (ideal index, representative index).
    generators: HashMap<(usize, usize), Integral>,
}

impl FieldOracle {
    pub fn new(d: i64, bound: i128) -> Self {
        let e = field(d);
        let ideals = ideals_up_to(&e, bound);
        let mut reps: Vec<usize> = vec![];
        let mut class_of = vec![];
        for (i, j) in ideals.iter().enumerate() {
            match reps.iter().position(|&r| same_class(&e, &ideals[r], j)) {
                Some(k) => class_of.push(k),
                None => {
                    reps.push(i);
                    class_of.push(reps.len() - 1);
                }
            }
        }
        FieldOracle {
            d: d as i128,
            h: reps.len(),
            units: units(d as i128),
            field: e,
            ideals,
            class_of,
            generators: HashMap::new(),
        }
    }

    fn generator(&mut self, j: usize, r: usize) -> Integral {
        if let Some(g) = self.generators.get(&(j, r)) {
            return *g;
        }
        let (a, b) = (&self.ideals[j], &self.ideals[r]);
        let prod = a.mul(&b.conj(&self.field), &self.field).unwrap();
        let g = element_of_norm(self.d, &prod, a.norm_int() * b.norm_int()).expect("same class");
        self.generators.insert((j, r), g);
        g
    }

    /// Ray class invariants `(class, min over units of u·g mod I)` of the
    /// ideals with norm prime to `Nm(I)`, where `J conj(R_k) = (g)`.
    pub fn ray_invariants(&mut self, modulus: &OIdeal) -> Vec<(usize, (usize, Integral))> {
        let nm = modulus.norm_int();
        let basis = modulus.scaled_basis();
        // per class, the first ideal of norm prime to the modulus
        let mut reps: Vec<Option<usize>> = vec![None; self.h];
        for (i, j) in self.ideals.iter().enumerate() {
            let k = self.class_of[i];
            if reps[k].is_none() && j.norm_int().gcd(&nm) == 1 {
                reps[k] = Some(i);
            }
        }
        let mut out = vec![];
        for i in 0..self.ideals.len() {
            if self.ideals[i].norm_int().gcd(&nm) != 1 {
                continue;
            }
            let k = self.class_of[i];
            let g = self.generator(i, reps[k].expect("class has a coprime ideal"));
            let key = self
                .units
                .iter()
                .map(|&u| reduce(basis, mul(self.d, u, g)))
                .min()
                .unwrap();
            out.push((i, (k, key)));
        }
        out
    }

    /// `|(O/I)^×|` and `|μ ∩ (1 + I)|` by exhaustive residue search.
    pub fn residue_counts(&self, modulus: &OIdeal) -> (usize, usize) {
        let basis = modulus.scaled_basis();
        let [(p, _), (_, r)] = basis;
        let residues: Vec<Integral> = (0..r).flat_map(|y| (0..p).map(move |x| (x, y))).collect();
        let one = reduce(basis, (1, 0));
        let phi = residues
            .iter()
            .filter(|&&a| {
                residues
                    .iter()
                    .any(|&b| reduce(basis, mul(self.d, a, b)) == one)
            })
            .count();
        let kernel = self
            .units
            .iter()
            .filter(|&&u| reduce(basis, u) == one)
            .count();
        (phi, kernel)
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }
}

/// Disagreement between a computed ray class group and the oracle, if any.
pub fn check_ray_class(
    oracle: &mut FieldOracle,
    modulus: &OIdeal,
    g: &RayClassGroup,
) -> Option<String> {
    let e = oracle.field.clone();
    let s = g.structure().clone();
    let (phi, kernel) = oracle.residue_counts(modulus);
    let predicted = oracle.h * phi * kernel / oracle.unit_count();
    if g.order() != predicted as u128 {
        return Some(format!(
            "order {} but brute-force count gives {predicted}",
            g.order()
        ));
    }
    let inv = oracle.ray_invariants(modulus);
    let mut log_of: HashMap<(usize, Integral), Vec<i64>> = HashMap::new();
    let mut seen: HashMap<Vec<i64>, (usize, Integral)> = HashMap::new();
    let mut logs = vec![];
    for (i, key) in &inv {
        let l = match g.log(&oracle.ideals[*i]) {
            Ok(l) => l,
            Err(err) => return Some(format!("log of {} failed: {err}", oracle.ideals[*i])),
        };
        if let Some(prev) = log_of.insert(*key, l.clone()) {
            if prev != l {
                return Some(format!("equivalent ideals get logs {prev:?} and {l:?}"));
            }
        }
        if let Some(prev) = seen.insert(l.clone(), *key) {
            if prev != *key {
                return Some(format!("inequivalent ideals share log {l:?}"));
            }
        }
        logs.push((*i, l));
    }
    let mut span: HashSet<Vec<i64>> = [s.zero()].into();
    for (_, l) in &logs {
        if span.contains(l) {
            continue;
        }
        let mut frontier: Vec<Vec<i64>> = span.iter().cloned().collect();
        while let Some(x) = frontier.pop() {
            let y = s.add(&x, l);
            if span.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    if span.len() as u128 != g.order() {
        return Some("oracle ideals do not generate the group".into());
    }
    // products of small ideals
    let small: Vec<&(usize, Vec<i64>)> = logs.iter().take(12).collect();
    for (i, a) in &small {
        for (j, b) in &small {
            let p = oracle.ideals[*i].mul(&oracle.ideals[*j], &e).unwrap();
            if g.log(&p).ok() != Some(s.add(a, b)) {
                return Some(format!(
                    "log is not additive on {} * {}",
                    oracle.ideals[*i], oracle.ideals[*j]
                ));
            }
        }
    }
    if modulus.conj(&e) == *modulus {
        let c = match g.conjugation() {
            Some(c) => c.to_vec(),
            None => return Some("no conjugation on a stable modulus".into()),
        };
        for (i, l) in &logs {
            let bar = oracle.ideals[*i].conj(&e);
            if g.log(&bar).ok() != Some(s.apply(&c, l)) {
                return Some(format!(
                    "conjugation matrix disagrees on {}",
                    oracle.ideals[*i]
                ));
            }
            if s.apply(&c, &s.apply(&c, l)) != *l {
                return Some("conjugation is not an involution".into());
            }
        }
    }
    None
}

/// Even positive definite Gram matrices of rank 1 and 2 with determinant at
/// most `bound`, rank 2 ones in reduced form.
pub fn small_definite_grams(bound: i128) -> Vec<IntMatrix> {
    let mut out: Vec<IntMatrix> = (1..=bound / 2).map(|k| vec![vec![2 * k]]).collect();
    out.extend(reduced_even_grams(bound));
    out
}

fn quad(g: &IntMatrix, v: &[i128]) -> i128 {
    let n = v.len();
    (0..n)
        .map(|i| (0..n).map(|j| v[i] * g[i][j] * v[j]).sum::<i128>())
        .sum()
}

/// All isometries of a definite lattice of rank 1 or 2, as matrices whose
/// columns are the images of the basis.
pub fn isometries(gram: &IntMatrix) -> Vec<IntMatrix> {
    let sign = if gram[0][0] < 0 { -1 } else { 1 };
    let g: IntMatrix = gram
        .iter()
        .map(|r| r.iter().map(|x| sign * x).collect())
        .collect();
    let n = g.len();
    if n == 1 {
        return vec![vec![vec![1]], vec![vec![-1]]];
    }
    let range = 16;
    let vecs = |target: i128| -> Vec<Vec<i128>> {
        let mut v = vec![];
        for x in -range..=range {
            for y in -range..=range {
                if quad(&g, &[x, y]) == target {
                    v.push(vec![x, y]);
                }
            }
        }
        v
    };
    let mut out = vec![];
    for c0 in vecs(g[0][0]) {
        for c1 in vecs(g[1][1]) {
            let pair = (0..2)
                .map(|i| (0..2).map(|j| c0[i] * g[i][j] * c1[j]).sum::<i128>())
                .sum::<i128>();
            let det = c0[0] * c1[1] - c0[1] * c1[0];
            if pair == g[0][1] && det.abs() == 1 {
                out.push(vec![vec![c0[0], c1[0]], vec![c0[1], c1[1]]]);
            }
        }
    }
    out
}

fn mat_vec_rat(f: &IntMatrix, v: &[Rational]) -> Vec<Rational> {
    f.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .map(|(&a, &b)| Rational::from_integer(a) * b)
                .sum()
        })
        .collect()
}

/// The overlattice `M ⊂ N^∨ ⊕ T^∨` glued along `ident` as an explicit list
/// of coset representatives of `M / (N ⊕ T)`.
pub struct Overlattice {
    pub glue: Vec<Vec<Rational>>,
    pub rank_n: usize,
}

impl Overlattice {
    /// Builds `M` and verifies it is even and integral.
    pub fn new(n: &IntegerLattice, t: &IntegerLattice, ident: &[Vec<i64>]) -> Result<Option<Self>> {
        let (fn_, ft) = (n.discriminant_form()?, t.discriminant_form()?);
        let vec_n = fn_.generator_vectors();
        let glue_gens: Vec<Vec<Rational>> = t
            .discriminant_form()?
            .generator_vectors()
            .iter()
            .zip(ident)
            .map(|(vt, col)| {
                let mut w = vec![Rational::from_integer(0); n.rank()];
                for (k, &c) in col.iter().enumerate() {
                    for i in 0..n.rank() {
                        w[i] += Rational::from_integer(c as i128) * vec_n[k][i];
                    }
                }
                w.into_iter().chain(vt.iter().copied()).collect()
            })
            .collect();
        let orders = ft.group().divisors().to_vec();
        let sum = n.direct_sum(t);
        let gram = sum.gram();
        let pair = |x: &[Rational], y: &[Rational]| -> Rational {
            let k = x.len();
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| x[i] * Rational::from_integer(gram[i][j]) * y[j])
                        .sum::<Rational>()
                })
                .sum()
        };
        for a in &glue_gens {
            if !(pair(a, a) / Rational::from_integer(2)).is_integer() {
                return Ok(None);
            }
            for b in &glue_gens {
                if !pair(a, b).is_integer() {
                    return Ok(None);
                }
            }
        }
        // all combinations sum k_i g_i with 0 <= k_i < order_i
        let mut glue = vec![vec![Rational::from_integer(0); sum.rank()]];
        for (g, &m) in glue_gens.iter().zip(&orders) {
            let mut next = vec![];
            for v in &glue {
                for k in 0..m {
                    next.push(
                        v.iter()
                            .zip(g)
                            .map(|(&a, &b)| a + Rational::from_integer(k as i128) * b)
                            .collect(),
                    );
                }
            }
            glue = next;
        }
        Ok(Some(Overlattice {
            glue,
            rank_n: n.rank(),
        }))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.glue
            .iter()
            .any(|g| g.iter().zip(v).all(|(&a, &b)| (b - a).is_integer()))
    }

    /// Whether `f_N ⊕ f_T` maps `M` into itself.
    pub fn preserved_by(&self, f_n: &IntMatrix, f_t: &IntMatrix) -> bool {
        let k = self.rank_n;
        self.glue.iter().all(|g| {
            let img: Vec<Rational> = mat_vec_rat(f_n, &g[..k])
                .into_iter()
                .chain(mat_vec_rat(f_t, &g[k..]))
                .collect();
            self.contains(&img)
        })
    }
}

/// Outcome of comparing `glue_check` with the overlattice search over every
/// identification and every pair of isometries.
pub struct GlueTally {
    pub cases: usize,
    pub failures: Vec<String>,
}

pub fn glue_agreement(n: &IntegerLattice, t: &IntegerLattice, tally: &mut GlueTally) {
    let (fn_, ft) = (
        n.discriminant_form().unwrap(),
        t.discriminant_form().unwrap(),
    );
    let iso_n = isometries(n.gram());
    let iso_t = isometries(t.gram());
    let maps_n: Vec<_> = iso_n
        .iter()
        .map(|f| n.induced_disc_map(f).unwrap())
        .collect();
    let maps_t: Vec<_> = iso_t
        .iter()
        .map(|f| t.induced_disc_map(f).unwrap())
        .collect();
    let mut seen = HashSet::new();
    for ident in ft.anti_isometries(&fn_) {
        if !seen.insert(ident.clone()) {
            continue;
        }
        let Some(m) = Overlattice::new(n, t, &ident).unwrap() else {
            tally.failures.push(format!(
                "{:?} / {:?}: identification does not give an even overlattice",
                n.gram(),
                t.gram()
            ));
            continue;
        };
        for (f, mf) in iso_n.iter().zip(&maps_n) {
            for (g, mg) in iso_t.iter().zip(&maps_t) {
                tally.cases += 1;
                let expected = m.preserved_by(f, g);
                match glue_check(mf, mg, &ident) {
                    Ok(got) if got == expected => {}
                    other => tally.failures.push(format!(
                        "N = {:?}, T = {:?}, f_N = {f:?}, f_T = {g:?}: glue_check {other:?}, lift {expected}",
                        n.gram(),
                        t.gram()
                    )),
                }
            }
        }
    }
}

/// Reduced even positive definite rank-2 Gram matrices `[[2a,b],[b,2c]]`
/// with determinant at most `bound`.
pub fn reduced_even_grams(bound: i128) -> Vec<IntMatrix> {
    let mut out = vec![];
    let mut a = 1;
    while 3 * a * a <= bound {
        for b in -a..=a {
            let mut c = a;
            while 4 * a * c - b * b <= bound {
                if !(b < 0 && (-b == a || a == c)) {
                    out.push(vec![vec![2 * a, b], vec![b, 2 * c]]);
                }
                c += 1;
            }
        }
        a += 1;
    }
    out
}
