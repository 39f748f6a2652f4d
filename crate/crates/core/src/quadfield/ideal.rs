use super::{FieldElement, ImaginaryQuadraticField, Integral};
use crate::arith::{gcd, xgcd, Rational};
use crate::error::{Error, Result};
use num_integer::Integer;
use std::fmt;

/// Fractional ideal `(1/den) * (Z·(a c) + Z·(b c + c w))`, stored canonically:
/// `a, c > 0`, `0 <= b < a`, `a | Nm(b + w)`, `gcd(den, c) = 1`.
///
/// Two ideals are equal as sets iff their stored values are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OIdeal {
    d: i64,
    den: i128,
    a: i128,
    b: i128,
    c: i128,
}

/// Hermite basis `{(p, 0), (q, r)}` of the lattice spanned by `vectors`,
/// with `0 <= q < p` when `p > 0`.
fn hermite2(vectors: &[Integral]) -> (i128, i128, i128) {
    let (mut p, mut q, mut r) = (0i128, 0i128, 0i128);
    for &(x, y) in vectors {
        let (x, y) = if y != 0 {
            let (g, s, t) = xgcd(r, y);
            let (rg, yg) = (r / g, y / g);
            let eliminated = yg * q - rg * x;
            q = s * q + t * x;
            r = g;
            (eliminated, 0)
        } else {
            (x, y)
        };
        debug_assert_eq!(y, 0);
        p = gcd(p, x);
        if p > 0 {
            q = q.rem_euclid(p);
        }
    }
    (p, q, r)
}

impl OIdeal {
    /// Ideal from integer vectors spanning `den * I` as a Z-module.
    fn from_scaled_lattice(
        field: &ImaginaryQuadraticField,
        vectors: &[Integral],
        den: i128,
    ) -> Result<Self> {
        let (p, q, r) = hermite2(vectors);
        if p == 0 || r == 0 {
            return Err(Error::ZeroIdeal);
        }
        let c = r;
        debug_assert!(p % c == 0 && q % c == 0, "lattice is not an O-ideal");
        let (a, b) = (p / c, q / c);
        let g = gcd(den, c);
        let ideal = OIdeal {
            d: field.discriminant(),
            den: den / g,
            a,
            b,
            c: c / g,
        };
        debug_assert!(ideal.is_o_stable(field));
        Ok(ideal)
    }

    fn is_o_stable(&self, field: &ImaginaryQuadraticField) -> bool {
        field.norm((self.b, 1)) % self.a == 0
    }

    /// Ideal spanned over Z by the given field elements (the caller
    /// guarantees the span is an O-module).
    pub fn from_z_span(field: &ImaginaryQuadraticField, gens: &[FieldElement]) -> Result<Self> {
        let den = gens
            .iter()
            .fold(1i128, |l, g| l.lcm(&g.as_integral_over().1));
        let vectors: Vec<Integral> = gens
            .iter()
            .map(|g| {
                let s = g.scale(Rational::from_integer(den));
                (s.x.to_integer(), s.y.to_integer())
            })
            .collect();
        Self::from_scaled_lattice(field, &vectors, den)
    }

    /// Ideal generated over O by the given elements.
    pub fn generated_by(field: &ImaginaryQuadraticField, gens: &[FieldElement]) -> Result<Self> {
        if gens
            .iter()
            .any(|g| g.discriminant() != field.discriminant())
        {
            let bad = gens
                .iter()
                .find(|g| g.discriminant() != field.discriminant())
                .unwrap();
            return Err(Error::MixedFields(field.discriminant(), bad.discriminant()));
        }
        let w = FieldElement::from_integral(field, (0, 1));
        let mut span = vec![];
        for g in gens {
            span.push(g.clone());
            span.push(g.mul(&w)?);
        }
        Self::from_z_span(field, &span)
    }

    pub fn principal(field: &ImaginaryQuadraticField, g: Integral) -> Self {
        let gw = field.mul(g, (0, 1));
        Self::from_scaled_lattice(field, &[g, gw], 1).expect("nonzero generator")
    }

    pub fn principal_element(field: &ImaginaryQuadraticField, g: &FieldElement) -> Result<Self> {
        Self::generated_by(field, std::slice::from_ref(g))
    }

    pub fn from_integer(field: &ImaginaryQuadraticField, n: i128) -> Self {
        Self::principal(field, (n, 0))
    }

    pub fn one(field: &ImaginaryQuadraticField) -> Self {
        OIdeal {
            d: field.discriminant(),
            den: 1,
            a: 1,
            b: 0,
            c: 1,
        }
    }

    /// Builds from a raw triple, validating and normalizing it.
    pub fn from_triple(
        field: &ImaginaryQuadraticField,
        den: i128,
        a: i128,
        b: i128,
        c: i128,
    ) -> Result<Self> {
        if den <= 0 || a <= 0 || c <= 0 {
            return Err(Error::Parse(format!(
                "ideal triple {den}:[{a},{b},{c}] needs positive den, a, c"
            )));
        }
        if field.norm((b, 1)) % a != 0 {
            return Err(Error::Parse(format!(
                "[{a},{b},{c}] is not an ideal: {a} does not divide Nm({b}+w)"
            )));
        }
        Self::from_scaled_lattice(field, &[(a * c, 0), (b * c, c)], den)
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    /// `(den, a, b, c)`.
    pub fn triple(&self) -> (i128, i128, i128, i128) {
        (self.den, self.a, self.b, self.c)
    }

    pub fn denominator(&self) -> i128 {
        self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den == 1
    }

    /// Content `c`: the largest integer dividing the numerator ideal.
    pub fn content(&self) -> i128 {
        self.c
    }

    /// The primitive integral ideal `Z a + Z (b + w)` in the class of `self`.
    pub fn primitive_part(&self) -> OIdeal {
        OIdeal {
            d: self.d,
            den: 1,
            a: self.a,
            b: self.b,
            c: 1,
        }
    }

    /// Integer basis of `den * I` in `(1, w)` coordinates: `(a c, 0)`, `(b c, c)`.
    pub fn scaled_basis(&self) -> [Integral; 2] {
        [(self.a * self.c, 0), (self.b * self.c, self.c)]
    }

    pub fn z_basis(&self, field: &ImaginaryQuadraticField) -> [FieldElement; 2] {
        let inv = Rational::new(1, self.den);
        self.scaled_basis()
            .map(|v| FieldElement::from_integral(field, v).scale(inv))
    }

    pub fn norm(&self) -> Rational {
        Rational::new(self.a * self.c * self.c, self.den * self.den)
    }

    /// Norm of an integral ideal as an integer.
    pub fn norm_int(&self) -> i128 {
        debug_assert!(self.is_integral());
        self.a * self.c * self.c
    }

    /// Least positive integer in an integral ideal.
    pub fn min_integer(&self) -> i128 {
        debug_assert!(self.is_integral());
        self.a * self.c
    }

    fn same(&self, o: &OIdeal) -> Result<()> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(Error::MixedFields(self.d, o.d))
        }
    }

    pub fn mul(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<OIdeal> {
        self.same(o)?;
        field.check_same(self.d)?;
        let mut v = Vec::with_capacity(4);
        for x in self.scaled_basis() {
            for y in o.scaled_basis() {
                v.push(field.mul(x, y));
            }
        }
        Self::from_scaled_lattice(field, &v, self.den * o.den)
    }

    pub fn add(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<OIdeal> {
        self.same(o)?;
        field.check_same(self.d)?;
        let l = self.den.lcm(&o.den);
        let (s1, s2) = (l / self.den, l / o.den);
        let mut v = vec![];
        for (x, y) in self.scaled_basis() {
            v.push((x * s1, y * s1));
        }
        for (x, y) in o.scaled_basis() {
            v.push((x * s2, y * s2));
        }
        Self::from_scaled_lattice(field, &v, l)
    }

    pub fn conj(&self, field: &ImaginaryQuadraticField) -> OIdeal {
        let v = self.scaled_basis().map(|x| field.conj(x));
        Self::from_scaled_lattice(field, &v, self.den).expect("nonzero")
    }

    pub fn inverse(&self, field: &ImaginaryQuadraticField) -> OIdeal {
        // I^{-1} = conj(I) / Nm(I)
        let n = self.norm();
        let c = self.conj(field);
        c.scale(n.recip(), field)
    }

    /// `q * I` for a nonzero rational `q`.
    pub fn scale(&self, q: Rational, field: &ImaginaryQuadraticField) -> OIdeal {
        let (num, den) = (*q.numer(), *q.denom());
        let v = self
            .scaled_basis()
            .map(|(x, y)| (x * num.abs(), y * num.abs()));
        Self::from_scaled_lattice(field, &v, self.den * den).expect("nonzero")
    }

    pub fn div(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<OIdeal> {
        self.same(o)?;
        self.mul(&o.inverse(field), field)
    }

    /// `I ∩ J = I J (I + J)^{-1}` (valid in a Dedekind domain).
    pub fn intersect(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<OIdeal> {
        let s = self.add(o, field)?;
        self.mul(o, field)?.div(&s, field)
    }

    pub fn pow(&self, e: i64, field: &ImaginaryQuadraticField) -> OIdeal {
        let base = if e < 0 {
            self.inverse(field)
        } else {
            self.clone()
        };
        let mut r = OIdeal::one(field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b, field).expect("same field");
            }
            b = b.mul(&b, field).expect("same field");
            k >>= 1;
        }
        r
    }

    pub fn contains_integral(&self, (x, y): Integral) -> bool {
        let (x, y) = (x * self.den, y * self.den);
        let [(p, _), (q, r)] = self.scaled_basis();
        if y % r != 0 {
            return false;
        }
        (x - (y / r) * q) % p == 0
    }

    pub fn contains(&self, e: &FieldElement) -> bool {
        if e.discriminant() != self.d {
            return false;
        }
        // e = (x, y)/m lies in (1/den) L  <=>  den (x, y) lies in m L
        let ((x, y), m) = e.as_integral_over();
        let [(p, _), (q, r)] = self.scaled_basis();
        let (x, y) = (x * self.den, y * self.den);
        if y % (m * r) != 0 {
            return false;
        }
        (x - (y / (m * r)) * m * q) % (m * p) == 0
    }

    /// `I ⊆ J`.
    pub fn is_subset_of(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<bool> {
        self.same(o)?;
        Ok(self.add(o, field)? == *o)
    }

    pub fn is_coprime_to(&self, o: &OIdeal, field: &ImaginaryQuadraticField) -> Result<bool> {
        Ok(self.add(o, field)? == OIdeal::one(field))
    }
}

impl fmt::Display for OIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:[{},{},{}]", self.den, self.a, self.b, self.c)
    }
}
