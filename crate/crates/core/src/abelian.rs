//! Finite abelian groups in invariant-factor form, plus a builder that turns
//! any concrete finite abelian group (given by a multiplication law) into that
//! form together with a complete discrete-log table.

use crate::matrix::{integer_kernel, smith_normal_form, IntMatrix, RowHermite};
use serde::Serialize;
use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

/// `Z/d_1 ⊕ ... ⊕ Z/d_k` with `1 < d_1 | d_2 | ... | d_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteAbelianGroup {
    divisors: Vec<i64>,
}

impl FiniteAbelianGroup {
    /// Builds the group from arbitrary cyclic orders, normalizing them into
    /// an invariant-factor chain.
    pub fn from_orders(orders: &[i64]) -> Self {
        let n = orders.len();
        let mut m: IntMatrix = vec![vec![0; n]; n];
        for (i, &o) in orders.iter().enumerate() {
            m[i][i] = o as i128;
        }
        let divisors = smith_normal_form(&m)
            .diagonal()
            .into_iter()
            .filter(|&x| x != 1)
            .map(|x| x as i64)
            .collect();
        FiniteAbelianGroup { divisors }
    }

    /// From a chain already satisfying `1 < d_1 | d_2 | ...`.
    pub(crate) fn from_chain(divisors: Vec<i64>) -> Self {
        debug_assert!(
            divisors.iter().all(|&d| d > 1) && divisors.windows(2).all(|w| w[1] % w[0] == 0)
        );
        FiniteAbelianGroup { divisors }
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { divisors: vec![] }
    }

    pub fn divisors(&self) -> &[i64] {
        &self.divisors
    }

    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    pub fn order(&self) -> u128 {
        self.divisors.iter().map(|&d| d as u128).product()
    }

    pub fn exponent(&self) -> i64 {
        self.divisors.last().copied().unwrap_or(1)
    }

    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        x.iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| a.rem_euclid(d))
            .collect()
    }

    pub fn zero(&self) -> Vec<i64> {
        vec![0; self.rank()]
    }

    pub fn add(&self, x: &[i64], y: &[i64]) -> Vec<i64> {
        let s: Vec<i64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, x: &[i64], k: i64) -> Vec<i64> {
        let s: Vec<i64> = x
            .iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| ((a as i128 * k as i128).rem_euclid(d as i128)) as i64)
            .collect();
        s
    }

    pub fn element_order(&self, x: &[i64]) -> i64 {
        x.iter()
            .zip(&self.divisors)
            .map(|(&a, &d)| d / num_integer::gcd(a.rem_euclid(d), d))
            .fold(1, num_integer::lcm)
    }

    /// All elements, in lexicographic order of their coordinates.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.divisors {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..d).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    /// Structure of the subgroup generated by `gens`, with generators of its
    /// invariant factors expressed in this group's coordinates.
    pub fn subgroup(&self, gens: &[Vec<i64>]) -> Subgroup {
        let k = self.rank();
        let m = gens.len();
        if m == 0 || k == 0 {
            return Subgroup {
                structure: FiniteAbelianGroup::trivial(),
                generators: vec![],
            };
        }
        // relations c in Z^m with sum c_j g_j in D Z^k: kernel of [G | D]
        let mut a: IntMatrix = vec![vec![0; m + k]; k];
        for (j, g) in gens.iter().enumerate() {
            for i in 0..k {
                a[i][j] = g[i] as i128;
            }
        }
        for i in 0..k {
            a[i][m + i] = self.divisors[i] as i128;
        }
        let ker = integer_kernel(&a, m + k);
        let rel: IntMatrix = ker.iter().map(|v| v[..m].to_vec()).collect();
        let s = smith_normal_form(&rel);
        let diag = s.diagonal();
        // Z^m / rowspace(rel): coordinates x -> x V, generators are rows of V^{-1}
        let vinv = crate::matrix::rational_inverse(&s.v).expect("unimodular");
        let mut structure = vec![];
        let mut generators = vec![];
        for i in 0..m {
            let di = diag.get(i).copied().unwrap_or(0);
            if di == 1 {
                continue;
            }
            assert!(di != 0, "subgroup of a finite group is finite");
            let row: Vec<i128> = vinv[i].iter().map(|q| q.to_integer()).collect();
            let mut elt = self.zero();
            for (j, g) in gens.iter().enumerate() {
                elt = self.add(
                    &elt,
                    &self.scale(g, (row[j] % self.exponent() as i128) as i64),
                );
            }
            structure.push(di as i64);
            generators.push(elt);
        }
        Subgroup {
            structure: FiniteAbelianGroup {
                divisors: structure,
            },
            generators,
        }
    }

    /// Fixed subgroup `{x : M x = x}` of the endomorphism whose columns are
    /// the images of the generators.
    pub fn fixed_subgroup(&self, endo: &[Vec<i64>]) -> Subgroup {
        let k = self.rank();
        if k == 0 {
            return self.subgroup(&[]);
        }
        // x with (M - 1) x in D Z^k: kernel of [M - 1 | D], first k coordinates
        let mut a: IntMatrix = vec![vec![0; 2 * k]; k];
        for i in 0..k {
            for j in 0..k {
                a[i][j] = endo[j][i] as i128 - i128::from(i == j);
            }
            a[i][k + i] = self.divisors[i] as i128;
        }
        let ker = integer_kernel(&a, 2 * k);
        let gens: Vec<Vec<i64>> = ker
            .iter()
            .map(|v| {
                let x: Vec<i64> = v[..k]
                    .iter()
                    .zip(&self.divisors)
                    .map(|(&c, &d)| c.rem_euclid(d as i128) as i64)
                    .collect();
                x
            })
            .collect();
        self.subgroup(&gens)
    }

    /// Applies an endomorphism given by the images of the generators.
    pub fn apply(&self, endo: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
        let mut out = self.zero();
        for (j, col) in endo.iter().enumerate() {
            out = self.add(&out, &self.scale(col, x[j]));
        }
        out
    }
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.divisors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.divisors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Subgroup {
    pub structure: FiniteAbelianGroup,
    pub generators: Vec<Vec<i64>>,
}

/// A concrete finite abelian group given by canonical element values.
pub(crate) trait GroupLaw {
    type Elem: Clone + Eq + Hash;
    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn pow(&self, a: &Self::Elem, mut e: u128) -> Self::Elem {
        let mut r = self.identity();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.op(&r, &b);
            }
            b = self.op(&b, &b);
            e >>= 1;
        }
        r
    }
}

/// A concrete group brought into invariant-factor form.
#[derive(Debug, Clone)]
pub(crate) struct Enumerated<E> {
    pub structure: FiniteAbelianGroup,
    /// Invariant coordinates of every element.
    pub logs: HashMap<E, Vec<i64>>,
    /// Elements realizing the invariant generators.
    pub generators: Vec<E>,
}

fn closure<G: GroupLaw>(law: &G, gens: &[G::Elem]) -> HashSet<G::Elem> {
    let mut seen = HashSet::new();
    let id = law.identity();
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = law.op(&x, g);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

/// Picks generators greedily from `candidates` (in order), enumerates the
/// generated group breadth-first, and reads off its structure from the
/// relation lattice.
pub(crate) fn enumerate_group<G: GroupLaw>(
    law: &G,
    candidates: impl IntoIterator<Item = G::Elem>,
) -> Enumerated<G::Elem> {
    let mut gens: Vec<G::Elem> = vec![];
    let mut span = closure(law, &gens);
    for c in candidates {
        if !span.contains(&c) {
            gens.push(c);
            span = closure(law, &gens);
        }
    }
    let k = gens.len();
    let id = law.identity();
    let mut raw: HashMap<G::Elem, Vec<i64>> = HashMap::new();
    let mut order: Vec<G::Elem> = vec![];
    raw.insert(id.clone(), vec![0; k]);
    order.push(id.clone());
    let mut relations: Vec<Vec<i128>> = vec![];
    let mut head = 0;
    while head < order.len() {
        let x = order[head].clone();
        head += 1;
        let vx = raw[&x].clone();
        for (j, g) in gens.iter().enumerate() {
            let y = law.op(&x, g);
            let mut v = vx.clone();
            v[j] += 1;
            match raw.get(&y) {
                Some(vy) => {
                    if *vy != v {
                        relations.push(v.iter().zip(vy).map(|(a, b)| (a - b) as i128).collect());
                    }
                }
                None => {
                    raw.insert(y.clone(), v);
                    order.push(y);
                }
            }
        }
    }
    let n = order.len() as i128;
    if k == 0 {
        return Enumerated {
            structure: FiniteAbelianGroup::trivial(),
            logs: raw,
            generators: vec![],
        };
    }
    let mut herm = RowHermite::with_seed(k, n);
    for r in relations {
        herm.insert(r);
    }
    let s = smith_normal_form(herm.rows());
    let diag = s.diagonal();
    let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
    let divisors: Vec<i64> = keep.iter().map(|&i| diag[i] as i64).collect();
    let structure = FiniteAbelianGroup {
        divisors: divisors.clone(),
    };
    let logs = raw
        .into_iter()
        .map(|(e, v)| {
            let coords: Vec<i64> = keep
                .iter()
                .zip(&divisors)
                .map(|(&i, &d)| {
                    let c: i128 = (0..k).map(|j| v[j] as i128 * s.v[j][i]).sum();
                    c.rem_euclid(d as i128) as i64
                })
                .collect();
            (e, coords)
        })
        .collect();
    let vinv = crate::matrix::rational_inverse(&s.v).expect("unimodular");
    let generators = keep
        .iter()
        .map(|&i| {
            let mut e = law.identity();
            for (j, g) in gens.iter().enumerate() {
                let c = vinv[i][j].to_integer().rem_euclid(n);
                e = law.op(&e, &law.pow(g, c as u128));
            }
            e
        })
        .collect();
    Enumerated {
        structure,
        logs,
        generators,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct UnitsMod(i64);

    impl GroupLaw for UnitsMod {
        type Elem = i64;
        fn identity(&self) -> i64 {
            1
        }
        fn op(&self, a: &i64, b: &i64) -> i64 {
            a * b % self.0
        }
    }

    #[test]
    fn units_mod_n_structure() {
        for (n, expect) in [
            (8, vec![2, 2]),
            (7, vec![6]),
            (15, vec![2, 4]),
            (2, vec![]),
            (24, vec![2, 2, 2]),
        ] {
            let law = UnitsMod(n);
            let units = (1..n).filter(|&a| num_integer::gcd(a, n) == 1);
            let e = enumerate_group(&law, units);
            assert_eq!(e.structure.divisors(), expect.as_slice(), "n = {n}");
            assert_eq!(e.logs.len() as u128, e.structure.order());
            // logs are a homomorphism and generators have the right logs
            for (a, la) in &e.logs {
                for (b, lb) in &e.logs {
                    assert_eq!(e.logs[&law.op(a, b)], e.structure.add(la, lb));
                }
            }
            for (i, g) in e.generators.iter().enumerate() {
                let mut unit = e.structure.zero();
                unit[i] = 1;
                assert_eq!(e.logs[g], unit);
            }
        }
    }

    #[test]
    fn subgroup_and_fixed_points() {
        let g = FiniteAbelianGroup::from_orders(&[2, 4]);
        assert_eq!(g.divisors(), &[2, 4]);
        let h = g.subgroup(&[vec![0, 2], vec![1, 0]]);
        assert_eq!(h.structure.divisors(), &[2, 2]);
        // a -> a, b -> a + b
        let conj = vec![vec![1, 0], vec![1, 1]];
        let fixed = g.fixed_subgroup(&conj);
        assert_eq!(fixed.structure.order(), 4);
        for x in &fixed.generators {
            assert_eq!(g.apply(&conj, x), g.reduce(x));
        }
        assert_eq!(
            FiniteAbelianGroup::from_orders(&[6, 4]).divisors(),
            &[2, 12]
        );
        assert_eq!(g.element_order(&[1, 1]), 4);
        assert_eq!(g.elements().len(), 8);
        assert_eq!(g.to_string(), "Z/2 + Z/4");
    }
}
