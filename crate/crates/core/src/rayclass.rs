//! Ray class groups `Cl_I(E)` of imaginary quadratic fields, the action of
//! complex conjugation on them, and the K3 class field degree.

use crate::abelian::{enumerate_group, FiniteAbelianGroup, GroupLaw, Subgroup};
use crate::arith::{euler_phi, gcd, primes, Limits, Rational};
use crate::error::{Error, Result};
use crate::k3type::{kernel_k_i, K3Type};
use crate::quadfield::{ClassGroup, FieldElement, ImaginaryQuadraticField, Integral, OIdeal};
use serde::Serialize;
use std::collections::HashMap;

/// `O / I` for a nonzero integral ideal, with canonical residues.
#[derive(Debug, Clone, PartialEq, Eq)]
struct ResidueRing {
    field: ImaginaryQuadraticField,
    /// Scaled basis `(p, 0), (q, r)` of `I`.
    p: i128,
    q: i128,
    r: i128,
}

impl ResidueRing {
    fn new(field: &ImaginaryQuadraticField, ideal: &OIdeal) -> Self {
        let [(p, _), (q, r)] = ideal.scaled_basis();
        ResidueRing {
            field: field.clone(),
            p,
            q,
            r,
        }
    }

    /// Representative with `0 <= y < r`, `0 <= x < p`.
    fn reduce(&self, (x, y): Integral) -> Integral {
        let k = y.div_euclid(self.r);
        let (x, y) = (x - k * self.q, y - k * self.r);
        (x.rem_euclid(self.p), y)
    }

    fn mul(&self, a: Integral, b: Integral) -> Integral {
        self.reduce(self.field.mul(a, b))
    }

    fn residues(&self) -> impl Iterator<Item = Integral> + '_ {
        (0..self.r).flat_map(move |y| (0..self.p).map(move |x| (x, y)))
    }
}

/// `(O_E / I)^×` with its invariant-factor structure and discrete logs.
#[derive(Debug, Clone)]
pub struct ResidueUnitGroup {
    modulus: OIdeal,
    ring: ResidueRing,
    prime_divisors: Vec<OIdeal>,
    structure: FiniteAbelianGroup,
    logs: HashMap<Integral, Vec<i64>>,
    generators: Vec<Integral>,
}

struct UnitLaw<'a>(&'a ResidueRing);

impl GroupLaw for UnitLaw<'_> {
    type Elem = Integral;
    fn identity(&self) -> Integral {
        self.0.reduce((1, 0))
    }
    fn op(&self, a: &Integral, b: &Integral) -> Integral {
        self.0.mul(*a, *b)
    }
}

fn check_modulus(field: &ImaginaryQuadraticField, modulus: &OIdeal, limits: &Limits) -> Result<()> {
    field.check_same(modulus.discriminant())?;
    if !modulus.is_integral() {
        return Err(Error::NotIntegral);
    }
    let norm = modulus.norm_int() as u128;
    if norm > limits.residue_cap {
        return Err(Error::ModulusTooLarge {
            norm,
            cap: limits.residue_cap,
        });
    }
    Ok(())
}

impl ResidueUnitGroup {
    pub fn new(field: &ImaginaryQuadraticField, modulus: &OIdeal, limits: &Limits) -> Result<Self> {
        check_modulus(field, modulus, limits)?;
        let prime_divisors: Vec<OIdeal> = field
            .factor_ideal(modulus, limits)?
            .into_iter()
            .map(|(q, _)| q.ideal)
            .collect();
        let ring = ResidueRing::new(field, modulus);
        let is_unit = |v: Integral| prime_divisors.iter().all(|q| !q.contains_integral(v));
        let units: Vec<Integral> = ring.residues().filter(|&v| is_unit(v)).collect();
        let law = UnitLaw(&ring);
        let e = enumerate_group(&law, units);
        Ok(ResidueUnitGroup {
            modulus: modulus.clone(),
            structure: e.structure,
            logs: e.logs,
            generators: e.generators,
            ring,
            prime_divisors,
        })
    }

    pub fn modulus(&self) -> &OIdeal {
        &self.modulus
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    /// `φ_E(I)`.
    pub fn phi(&self) -> u128 {
        self.logs.len() as u128
    }

    /// Residues realizing the invariant generators.
    pub fn generators(&self) -> &[Integral] {
        &self.generators
    }

    pub fn reduce(&self, x: Integral) -> Integral {
        self.ring.reduce(x)
    }

    pub fn mul(&self, a: Integral, b: Integral) -> Integral {
        self.ring.mul(a, b)
    }

    pub fn is_unit(&self, x: Integral) -> bool {
        self.prime_divisors.iter().all(|q| !q.contains_integral(x))
    }

    pub fn log(&self, x: Integral) -> Option<Vec<i64>> {
        self.logs.get(&self.ring.reduce(x)).cloned()
    }

    pub fn inverse(&self, x: Integral) -> Option<Integral> {
        if !self.is_unit(x) {
            return None;
        }
        let law = UnitLaw(&self.ring);
        Some(law.pow(&self.ring.reduce(x), self.phi() - 1))
    }

    fn field(&self) -> &ImaginaryQuadraticField {
        &self.ring.field
    }

    /// Valuation-free coprimality: `v_P(A) = 0` for every prime `P | I`.
    fn coprime(&self, ideal: &OIdeal) -> bool {
        let f = self.field();
        let den = ideal.denominator();
        let num = ideal.scale(Rational::from_integer(den), f);
        let den_ideal = OIdeal::from_integer(f, den);
        self.prime_divisors
            .iter()
            .all(|q| valuation(f, &num, q) == valuation(f, &den_ideal, q))
    }

    /// Residue of an element of `E^×` coprime to `I`.
    fn residue_of(&self, g: &FieldElement) -> Result<Integral> {
        let f = self.field();
        let (_, m) = g.as_integral_over();
        let norm = self.modulus.norm_int();
        let delta: Integral = if gcd(m, norm) == 1 {
            (m, 0)
        } else {
            // any element of the denominator ideal of g that is a unit mod I
            let denom =
                OIdeal::one(f).intersect(&OIdeal::principal_element(f, g)?.inverse(f), f)?;
            let [(a, _), (b, c)] = denom.scaled_basis();
            let mut found = None;
            'search: for box_size in 1i128.. {
                for s in -box_size..=box_size {
                    for t in -box_size..=box_size {
                        let v = (s * a + t * b, t * c);
                        if v != (0, 0) && self.is_unit(v) {
                            found = Some(v);
                            break 'search;
                        }
                    }
                }
            }
            found.expect("the denominator ideal is coprime to the modulus")
        };
        let prod = g.mul(&FieldElement::from_integral(f, delta))?;
        debug_assert!(prod.is_integral());
        let num = (prod.x.to_integer(), prod.y.to_integer());
        if !self.is_unit(num) {
            return Err(Error::NotCoprime);
        }
        let inv = self.inverse(delta).ok_or(Error::NotCoprime)?;
        Ok(self.mul(num, inv))
    }
}

/// Exponent of the prime `q` in the integral ideal `a`.
fn valuation(f: &ImaginaryQuadraticField, a: &OIdeal, q: &OIdeal) -> u32 {
    let inv = q.inverse(f);
    let mut cur = a.clone();
    let mut v = 0;
    while cur.is_subset_of(q, f).expect("same field") {
        cur = cur.mul(&inv, f).expect("same field");
        v += 1;
    }
    v
}

pub fn residue_units(
    field: &ImaginaryQuadraticField,
    modulus: &OIdeal,
    limits: &Limits,
) -> Result<ResidueUnitGroup> {
    ResidueUnitGroup::new(field, modulus, limits)
}

/// A ray class: ideal class index and a residue coset in `(O/I)^× / μ(E)`.
type RayElem = (usize, Integral);

/// The ray class group `Cl_I(E)`.
///
/// Every ideal `A` coprime to `I` is written `A = γ R_k` with `R_k` a fixed
/// representative of its ideal class; its ray class is `(k, [γ mod I])`.
#[derive(Debug, Clone)]
pub struct RayClassGroup {
    field: ImaginaryQuadraticField,
    modulus: OIdeal,
    units: ResidueUnitGroup,
    classes: ClassGroup,
    reps: Vec<OIdeal>,
    /// `R_i R_j = δ R_k`: entry `(k, δ mod I)`.
    cocycle: Vec<Vec<(usize, Integral)>>,
    structure: FiniteAbelianGroup,
    logs: HashMap<RayElem, Vec<i64>>,
    generators: Vec<OIdeal>,
    conjugation: Option<Vec<Vec<i64>>>,
}

struct RayLaw<'a> {
    units: &'a ResidueUnitGroup,
    mu: &'a [Integral],
    cocycle: &'a [Vec<(usize, Integral)>],
}

impl RayLaw<'_> {
    fn coset(&self, r: Integral) -> Integral {
        self.mu
            .iter()
            .map(|&u| self.units.mul(u, r))
            .min()
            .expect("1 is a root of unity")
    }
}

impl GroupLaw for RayLaw<'_> {
    type Elem = RayElem;
    fn identity(&self) -> RayElem {
        (0, self.coset((1, 0)))
    }
    fn op(&self, a: &RayElem, b: &RayElem) -> RayElem {
        let (k, delta) = self.cocycle[a.0][b.0];
        let r = self.units.mul(self.units.mul(a.1, b.1), delta);
        (k, self.coset(r))
    }
}

/// How many prime ideals to scan when labelling generators by primes.
const PRIME_LABEL_SCAN: usize = 20_000;

impl RayClassGroup {
    pub fn new(field: &ImaginaryQuadraticField, modulus: &OIdeal, limits: &Limits) -> Result<Self> {
        let units = ResidueUnitGroup::new(field, modulus, limits)?;
        let classes = ClassGroup::new(field);
        let h = classes.order();
        let norm = modulus.norm_int();
        // class representatives of norm prime to the modulus
        let mut reps: Vec<Option<OIdeal>> = vec![None; h];
        reps[0] = Some(OIdeal::one(field));
        let mut missing = h - 1;
        for p in primes() {
            if missing == 0 {
                break;
            }
            if norm % p as i128 == 0 {
                continue;
            }
            for q in field.primes_above(p) {
                let k = classes.class_index(&q.ideal);
                if reps[k].is_none() {
                    reps[k] = Some(q.ideal);
                    missing -= 1;
                }
            }
        }
        let reps: Vec<OIdeal> = reps
            .into_iter()
            .map(|r| r.expect("all classes reached"))
            .collect();
        let mut cocycle = vec![vec![(0, (0, 0)); h]; h];
        for i in 0..h {
            for j in 0..h {
                let prod = reps[i].mul(&reps[j], field)?;
                let k = classes.class_index(&prod);
                let delta = field
                    .principal_generator(&prod.div(&reps[k], field)?)
                    .expect("same class");
                cocycle[i][j] = (k, units.residue_of(&delta)?);
            }
        }
        let mu = field.roots_of_unity().to_vec();
        let law = RayLaw {
            units: &units,
            mu: &mu,
            cocycle: &cocycle,
        };
        let candidates: Vec<RayElem> = units
            .generators()
            .iter()
            .map(|&g| (0, law.coset(g)))
            .chain((1..h).map(|k| (k, law.coset((1, 0)))))
            .collect();
        let e = enumerate_group(&law, candidates);
        let stable = modulus.conj(field) == *modulus;

        let mut group = RayClassGroup {
            field: field.clone(),
            modulus: modulus.clone(),
            units,
            classes,
            reps,
            cocycle,
            structure: e.structure.clone(),
            logs: e.logs,
            generators: vec![],
            conjugation: None,
        };
        let mut gens = e.generators;
        if stable {
            let cols = gens
                .iter()
                .map(|&x| group.log(&group.ideal_of(x)?.conj(field)))
                .collect::<Result<Vec<_>>>()?;
            if let Some(basis) = simplest_basis(&group.structure, &cols) {
                let table = coordinate_table(&group.structure, &basis);
                let by_log: HashMap<&Vec<i64>, RayElem> =
                    group.logs.iter().map(|(x, l)| (l, *x)).collect();
                gens = basis.iter().map(|v| by_log[v]).collect();
                for l in group.logs.values_mut() {
                    *l = table[l].clone();
                }
            }
        }
        group.generators = group.label_generators(&gens)?;
        if stable {
            let cols = group
                .generators
                .iter()
                .map(|g| group.log(&g.conj(field)))
                .collect::<Result<Vec<_>>>()?;
            group.conjugation = Some(cols);
        }
        Ok(group)
    }

    /// Prefer the least prime ideal in each generator class; otherwise use
    /// `R_k (c)` for a lift `c` of the residue.
    fn label_generators(&self, elems: &[RayElem]) -> Result<Vec<OIdeal>> {
        let f = &self.field;
        let mut labels: Vec<Option<OIdeal>> = vec![None; elems.len()];
        let mut left = elems.len();
        let mut scanned = 0;
        'scan: for p in primes() {
            for q in f.primes_above(p) {
                if left == 0 || scanned >= PRIME_LABEL_SCAN {
                    break 'scan;
                }
                scanned += 1;
                if !self.units.coprime(&q.ideal) {
                    continue;
                }
                let x = self.element(&q.ideal)?;
                for (i, g) in elems.iter().enumerate() {
                    if labels[i].is_none() && *g == x {
                        labels[i] = Some(q.ideal.clone());
                        left -= 1;
                    }
                }
            }
        }
        elems
            .iter()
            .zip(labels)
            .map(|(&x, l)| match l {
                Some(l) => Ok(l),
                None => self.ideal_of(x),
            })
            .collect()
    }

    /// An integral ideal `R_k (c)` in the given ray class.
    fn ideal_of(&self, (k, c): RayElem) -> Result<OIdeal> {
        // O / O is the zero ring, where 0 = 1
        let c = if c == (0, 0) { (1, 0) } else { c };
        self.reps[k].mul(&OIdeal::principal(&self.field, c), &self.field)
    }

    fn law(&self) -> RayLaw<'_> {
        RayLaw {
            units: &self.units,
            mu: self.field.roots_of_unity(),
            cocycle: &self.cocycle,
        }
    }

    /// The ray class of an ideal coprime to the modulus, as a raw element.
    fn element(&self, ideal: &OIdeal) -> Result<RayElem> {
        let f = &self.field;
        f.check_same(ideal.discriminant())?;
        if !self.units.coprime(ideal) {
            return Err(Error::NotCoprime);
        }
        let k = self.classes.class_index(ideal);
        let gamma = f
            .principal_generator(&ideal.div(&self.reps[k], f)?)
            .expect("same class");
        let r = self.units.residue_of(&gamma)?;
        Ok((k, self.law().coset(r)))
    }

    pub fn field(&self) -> &ImaginaryQuadraticField {
        &self.field
    }

    pub fn modulus(&self) -> &OIdeal {
        &self.modulus
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    pub fn order(&self) -> u128 {
        self.structure.order()
    }

    pub fn residue_units(&self) -> &ResidueUnitGroup {
        &self.units
    }

    pub fn class_group(&self) -> &ClassGroup {
        &self.classes
    }

    /// Ideals coprime to the modulus realizing the invariant generators.
    pub fn generators(&self) -> &[OIdeal] {
        &self.generators
    }

    /// Discrete log of a fractional ideal coprime to the modulus.
    pub fn log(&self, ideal: &OIdeal) -> Result<Vec<i64>> {
        let x = self.element(ideal)?;
        Ok(self.logs[&x].clone())
    }

    /// Images of the generators under conjugation, as columns; `None` when
    /// the modulus is not conjugation-stable.
    pub fn conjugation(&self) -> Option<&[Vec<i64>]> {
        self.conjugation.as_deref()
    }

    pub fn conjugation_is_trivial(&self) -> Option<bool> {
        let c = self.conjugation.as_ref()?;
        Some(c.iter().enumerate().all(|(i, col)| {
            let mut e = self.structure.zero();
            e[i] = 1;
            *col == e
        }))
    }

    /// `{x : x = x̄}`.
    pub fn fixed_subgroup(&self) -> Option<Subgroup> {
        Some(self.structure.fixed_subgroup(self.conjugation.as_ref()?))
    }

    /// `|Cl_I / {x = x̄}|`.
    pub fn k3_degree(&self) -> Option<u128> {
        Some(self.order() / self.fixed_subgroup()?.structure.order())
    }
}

/// Largest group order for which a simpler generator basis is searched.
const BASIS_SEARCH_ORDER: u128 = 64;
const BASIS_SEARCH_TUPLES: usize = 500;

/// Map from old coordinates to coordinates in the basis `basis`.
fn coordinate_table(g: &FiniteAbelianGroup, basis: &[Vec<i64>]) -> HashMap<Vec<i64>, Vec<i64>> {
    let mut table = HashMap::new();
    for n in g.elements() {
        let mut old = g.zero();
        for (b, &k) in basis.iter().zip(&n) {
            old = g.add(&old, &g.scale(b, k));
        }
        table.insert(old, n);
    }
    table
}

fn span_size(g: &FiniteAbelianGroup, gens: &[Vec<i64>]) -> u128 {
    let mut span: std::collections::HashSet<Vec<i64>> = [g.zero()].into();
    for x in gens {
        let order = g.element_order(x);
        let mut next = std::collections::HashSet::new();
        for y in &span {
            let mut z = y.clone();
            for _ in 0..order {
                next.insert(z.clone());
                z = g.add(&z, x);
            }
        }
        span = next;
    }
    span.len() as u128
}

/// For small groups, an invariant basis in which the endomorphism `cols`
/// has the fewest and smallest entries off the identity.
fn simplest_basis(g: &FiniteAbelianGroup, cols: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    if g.rank() == 0 || g.order() > BASIS_SEARCH_ORDER {
        return None;
    }
    let elements = g.elements();
    let by_order: Vec<Vec<&Vec<i64>>> = g
        .divisors()
        .iter()
        .map(|&d| {
            elements
                .iter()
                .filter(|x| g.element_order(x) == d)
                .collect()
        })
        .collect();
    let mut best: Option<(i64, Vec<Vec<i64>>)> = None;
    let mut tuples = 0usize;
    let mut stack: Vec<Vec<i64>> = vec![];
    fn score(g: &FiniteAbelianGroup, cols: &[Vec<i64>], basis: &[Vec<i64>]) -> i64 {
        let table = coordinate_table(g, basis);
        let mut s = 0;
        for (j, b) in basis.iter().enumerate() {
            let img = &table[&g.apply(cols, b)];
            for (i, (&c, &d)) in img.iter().zip(g.divisors()).enumerate() {
                let x = (c - i64::from(i == j)).rem_euclid(d);
                s += x.min(d - x);
            }
        }
        s
    }
    #[allow(clippy::too_many_arguments)]
    fn go(
        g: &FiniteAbelianGroup,
        cols: &[Vec<i64>],
        by_order: &[Vec<&Vec<i64>>],
        stack: &mut Vec<Vec<i64>>,
        best: &mut Option<(i64, Vec<Vec<i64>>)>,
        tuples: &mut usize,
    ) -> bool {
        let i = stack.len();
        if i == by_order.len() {
            *tuples += 1;
            let s = score(g, cols, stack);
            if best.as_ref().is_none_or(|(b, _)| s < *b) {
                *best = Some((s, stack.clone()));
            }
            return *tuples < BASIS_SEARCH_TUPLES;
        }
        let want: u128 = g.divisors()[..=i].iter().map(|&d| d as u128).product();
        for x in &by_order[i] {
            stack.push((*x).clone());
            let ok = span_size(g, stack) == want;
            if ok && !go(g, cols, by_order, stack, best, tuples) {
                stack.pop();
                return false;
            }
            stack.pop();
        }
        true
    }
    if !go(g, cols, &by_order, &mut stack, &mut best, &mut tuples) {
        return None;
    }
    best.map(|(_, b)| b)
}

pub fn ray_class_group(
    field: &ImaginaryQuadraticField,
    modulus: &OIdeal,
    limits: &Limits,
) -> Result<RayClassGroup> {
    RayClassGroup::new(field, modulus, limits)
}

/// Conjugation matrix and fixed subgroup of `Cl_I`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugationAction {
    pub columns: Vec<Vec<i64>>,
    pub fixed: Subgroup,
    pub trivial: bool,
}

pub fn conjugation_action(rcg: &RayClassGroup) -> Result<ConjugationAction> {
    let columns = rcg
        .conjugation()
        .ok_or_else(|| {
            Error::NotApplicable(format!(
                "modulus {} is not stable under conjugation",
                rcg.modulus()
            ))
        })?
        .to_vec();
    Ok(ConjugationAction {
        fixed: rcg.fixed_subgroup().expect("stable modulus"),
        trivial: rcg.conjugation_is_trivial().expect("stable modulus"),
        columns,
    })
}

/// `[K'_I(E) : E] = |Cl_I| / |{x = x̄}|`, computed modulo `I ∩ Ī` when `I`
/// itself is not conjugation-stable.
pub fn k3_class_field_degree(
    field: &ImaginaryQuadraticField,
    modulus: &OIdeal,
    limits: &Limits,
) -> Result<u128> {
    let m = modulus.intersect(&modulus.conj(field), field)?;
    let g = RayClassGroup::new(field, &m, limits)?;
    Ok(g.k3_degree().expect("stable modulus"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelVerdict {
    pub admits_model: bool,
    pub degree: u128,
    pub reason: String,
}

/// Whether the surface of type `t` has a model with full Picard group over `E`.
pub fn model_over_e(t: &K3Type, limits: &Limits) -> Result<ModelVerdict> {
    if !t.has_big_discriminant() {
        return Err(Error::NotApplicable(
            "the type does not have big discriminant; the criterion needs μ(E) to inject into (O/D_X)^×".into(),
        ));
    }
    let g = RayClassGroup::new(t.field(), &t.discriminant_ideal(), limits)?;
    let trivial = g
        .conjugation_is_trivial()
        .expect("D_X is conjugation-stable");
    let degree = g.k3_degree().expect("D_X is conjugation-stable");
    let reason = if trivial {
        "complex conjugation acts trivially on the ray class group modulo D_X".to_string()
    } else {
        format!("complex conjugation acts nontrivially on the ray class group modulo D_X; the K3 class field has degree {degree} over E")
    };
    Ok(ModelVerdict {
        admits_model: trivial,
        degree,
        reason,
    })
}

/// The computable factors of the degree formula for `[F_{D_X}(E) : E]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeFactors {
    pub h_e: u128,
    pub phi_e: u128,
    /// Positive generator of `D_X ∩ Z`.
    pub m: u128,
    pub phi_m: u128,
    /// `[O_E^× : O_E^× ∩ (1 + D_X)] = [μ(E) : K_X]`.
    pub unit_index: u128,
    /// `[O_F^× : Nm(O_E^{D_X})]` with `F = Q`.
    pub norm_unit_index: u128,
    pub e_factor: u128,
    /// The formula with the cohomological factor omitted.
    pub formula: (i128, i128),
    pub degree: u128,
    /// `formula / degree`: the value the omitted factor would need to take.
    pub residual: (i128, i128),
}

pub fn degree_formula_factors(t: &K3Type, limits: &Limits) -> Result<DegreeFactors> {
    let f = t.field();
    let dx = t.discriminant_ideal();
    let h_e = ClassGroup::new(f).order() as u128;
    let phi_e = f.totient(&dx, limits)?;
    let m = dx.min_integer() as u128;
    let phi_m = euler_phi(m, limits)?;
    let kernel = kernel_k_i(f, &dx)?.len() as u128;
    let unit_index = f.roots_of_unity().len() as u128 / kernel;
    let norm_unit_index = 2;
    let e_factor = 2;
    let formula = Rational::new(
        (2 * h_e * phi_e * norm_unit_index) as i128,
        (phi_m * unit_index * e_factor) as i128,
    );
    let degree = RayClassGroup::new(f, &dx, limits)?
        .k3_degree()
        .expect("D_X is conjugation-stable");
    let residual = formula / Rational::from_integer(degree as i128);
    Ok(DegreeFactors {
        h_e,
        phi_e,
        m,
        phi_m,
        unit_index,
        norm_unit_index,
        e_factor,
        formula: (*formula.numer(), *formula.denom()),
        degree,
        residual: (*residual.numer(), *residual.denom()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::fundamental_discriminants;

    fn field(d: i64) -> ImaginaryQuadraticField {
        ImaginaryQuadraticField::new(d).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn residue_unit_examples() {
        let gauss = field(-4);
        let u = residue_units(&gauss, &OIdeal::from_integer(&gauss, 8), &lim()).unwrap();
        assert_eq!(u.phi(), 32);
        assert_eq!(u.structure().order(), 32);
        let e7 = field(-7);
        let u = residue_units(&e7, &e7.different(), &lim()).unwrap();
        assert_eq!(u.structure().divisors(), &[6]);
        let u = residue_units(&e7, &OIdeal::one(&e7), &lim()).unwrap();
        assert_eq!(u.structure().order(), 1);
        let small = Limits {
            residue_cap: 10,
            ..Limits::default()
        };
        assert!(matches!(
            residue_units(&gauss, &OIdeal::from_integer(&gauss, 8), &small),
            Err(Error::ModulusTooLarge { norm: 64, cap: 10 })
        ));
    }

    #[test]
    fn fermat_ray_class_group() {
        let gauss = field(-4);
        let g = ray_class_group(&gauss, &OIdeal::from_integer(&gauss, 8), &lim()).unwrap();
        assert_eq!(g.structure().divisors(), &[2, 4]);
        let a = OIdeal::from_integer(&gauss, 5);
        // 2i + 7 with i = w + 2
        let b = OIdeal::principal(&gauss, (11, 2));
        let (la, lb) = (g.log(&a).unwrap(), g.log(&b).unwrap());
        let s = g.structure();
        assert_eq!(s.subgroup(&[la.clone(), lb.clone()]).structure.order(), 8);
        assert_eq!(s.element_order(&la), 2);
        assert_eq!(s.element_order(&lb), 4);
        assert_eq!(g.log(&a.conj(&gauss)).unwrap(), la);
        // b * conj(b) = (53) and 53 = 5 mod 8, so conj(b) = a - b
        let lbc = g.log(&b.conj(&gauss)).unwrap();
        assert_eq!(lbc, s.add(&la, &s.scale(&lb, -1)));
        // with a' = a + 2b: conj(a') = a' and conj(b) = a' + b
        let a2 = s.add(&la, &s.scale(&lb, 2));
        assert_eq!(s.element_order(&a2), 2);
        assert_eq!(s.apply(g.conjugation().unwrap(), &a2), a2);
        assert_eq!(lbc, s.add(&a2, &lb));
        let fixed = g.fixed_subgroup().unwrap();
        assert_eq!(fixed.structure.divisors(), &[2, 2]);
        assert_eq!(
            s.subgroup(&[la.clone(), s.scale(&lb, 2)]),
            s.subgroup(&fixed.generators)
        );
        assert_eq!(g.fixed_subgroup().unwrap().structure.order(), 4);
        assert_eq!(g.k3_degree(), Some(2));
        for l in g.generators() {
            assert!(g.residue_units().coprime(l));
        }
        // the chosen basis renders conjugation as a -> a, b -> a b
        assert_eq!(g.conjugation().unwrap(), &[vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn sqrt_minus_seven() {
        let e7 = field(-7);
        let g = ray_class_group(&e7, &e7.different(), &lim()).unwrap();
        assert_eq!(g.structure().divisors(), &[3]);
        assert_eq!(g.conjugation_is_trivial(), Some(true));
        assert_eq!(
            k3_class_field_degree(&e7, &e7.different(), &lim()).unwrap(),
            1
        );
    }

    #[test]
    fn trivial_modulus_gives_class_group() {
        for d in [-3, -4, -20, -23, -84, -260] {
            let e = field(d);
            let g = ray_class_group(&e, &OIdeal::one(&e), &lim()).unwrap();
            assert_eq!(g.structure(), ClassGroup::new(&e).structure());
        }
        let e5 = field(-20);
        let g = ray_class_group(&e5, &OIdeal::one(&e5), &lim()).unwrap();
        assert_eq!(g.conjugation_is_trivial(), Some(true));
    }

    #[test]
    fn unstable_modulus_has_no_conjugation() {
        let gauss = field(-4);
        // 2 + i
        let p = OIdeal::principal(&gauss, (4, 1));
        let g = ray_class_group(&gauss, &p, &lim()).unwrap();
        assert!(g.conjugation().is_none());
        assert!(conjugation_action(&g).is_err());
        assert_eq!(
            k3_class_field_degree(&gauss, &p, &lim()).unwrap(),
            k3_class_field_degree(&gauss, &OIdeal::from_integer(&gauss, 5), &lim()).unwrap()
        );
    }

    #[test]
    fn ray_class_number_relation() {
        for d in [-3, -4, -7, -15, -20, -23] {
            let e = field(d);
            let h = ClassGroup::new(&e).order() as u128;
            for n in 1..=30i128 {
                for i in [OIdeal::from_integer(&e, n), OIdeal::principal(&e, (n, 1))] {
                    let g = ray_class_group(&e, &i, &lim()).unwrap();
                    let units = kernel_k_i(&e, &i).unwrap().len() as u128;
                    let index = e.roots_of_unity().len() as u128 / units;
                    assert_eq!(
                        g.order() * index,
                        h * g.residue_units().phi(),
                        "d = {d}, I = {i}"
                    );
                    assert_eq!(e.totient(&i, &lim()).unwrap(), g.residue_units().phi());
                    if let Some(c) = g.conjugation() {
                        let s = g.structure();
                        for x in s.elements().iter().take(64) {
                            assert_eq!(s.apply(c, &s.apply(c, x)), *x);
                        }
                        let fixed = g.fixed_subgroup().unwrap().structure.order();
                        assert_eq!(g.k3_degree().unwrap() * fixed, g.order());
                    }
                }
            }
        }
    }

    #[test]
    fn logs_are_homomorphic() {
        let e = field(-23);
        let m = OIdeal::from_integer(&e, 6);
        let g = ray_class_group(&e, &m, &lim()).unwrap();
        let ideals: Vec<OIdeal> = primes()
            .skip(2)
            .take(10)
            .flat_map(|p| e.primes_above(p))
            .map(|q| q.ideal)
            .collect();
        let s = g.structure();
        for i in &ideals {
            for j in &ideals {
                let ij = i.mul(&j.inverse(&e), &e).unwrap();
                let expect = s.add(&g.log(i).unwrap(), &s.scale(&g.log(j).unwrap(), -1));
                assert_eq!(g.log(&ij).unwrap(), expect);
            }
            // x * conj(x) is the norm class, fixed by conjugation
            let n = i.mul(&i.conj(&e), &e).unwrap();
            let ln = g.log(&n).unwrap();
            assert_eq!(s.apply(g.conjugation().unwrap(), &ln), ln);
        }
        assert_eq!(g.log(&OIdeal::from_integer(&e, 2)), Err(Error::NotCoprime));
    }

    #[test]
    fn model_verdicts() {
        let gauss = field(-4);
        let fermat = K3Type::new(&gauss, OIdeal::one(&gauss), 4.into()).unwrap();
        let v = model_over_e(&fermat, &lim()).unwrap();
        assert!(!v.admits_model);
        assert_eq!(v.degree, 2);
        for d in [-7, -163] {
            let e = field(d);
            let t = K3Type::new(&e, OIdeal::one(&e), 1.into()).unwrap();
            assert!(model_over_e(&t, &lim()).unwrap().admits_model);
        }
        let t = K3Type::new(&gauss, OIdeal::one(&gauss), 1.into()).unwrap();
        assert!(matches!(
            model_over_e(&t, &lim()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn degree_factor_examples() {
        let e7 = field(-7);
        let t = K3Type::new(&e7, OIdeal::one(&e7), 1.into()).unwrap();
        let f = degree_formula_factors(&t, &lim()).unwrap();
        assert_eq!((f.h_e, f.phi_e, f.m, f.phi_m), (1, 6, 7, 6));
        assert_eq!(f.residual, (1, 1));
        let gauss = field(-4);
        let t = K3Type::new(&gauss, OIdeal::one(&gauss), 4.into()).unwrap();
        let f = degree_formula_factors(&t, &lim()).unwrap();
        assert_eq!((f.phi_e, f.m, f.phi_m, f.degree), (32, 8, 4, 2));
        for d in fundamental_discriminants(60) {
            let e = field(d);
            if d % 2 != 0 {
                let t = K3Type::new(&e, OIdeal::one(&e), 1.into()).unwrap();
                assert_eq!(
                    degree_formula_factors(&t, &lim()).unwrap().m,
                    d.unsigned_abs() as u128
                );
            }
        }
    }
}
