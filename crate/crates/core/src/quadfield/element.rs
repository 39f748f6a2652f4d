use super::{ImaginaryQuadraticField, Integral};
use crate::arith::Rational;
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// `x + y w` with rational coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    d: i64,
    pub x: Rational,
    pub y: Rational,
}

impl FieldElement {
    pub fn new(field: &ImaginaryQuadraticField, x: Rational, y: Rational) -> Self {
        FieldElement {
            d: field.discriminant(),
            x,
            y,
        }
    }

    pub fn from_integral(field: &ImaginaryQuadraticField, (x, y): Integral) -> Self {
        Self::new(field, x.into(), y.into())
    }

    pub fn rational(field: &ImaginaryQuadraticField, q: Rational) -> Self {
        Self::new(field, q, Rational::zero())
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    fn n0(&self) -> Rational {
        let d = self.d as i128;
        Rational::from_integer((d * d - d) / 4)
    }

    fn dq(&self) -> Rational {
        Rational::from_integer(self.d as i128)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn norm(&self) -> Rational {
        self.x * self.x + self.dq() * self.x * self.y + self.n0() * self.y * self.y
    }

    pub fn trace(&self) -> Rational {
        Rational::from_integer(2) * self.x + self.dq() * self.y
    }

    pub fn conj(&self) -> Self {
        FieldElement {
            d: self.d,
            x: self.x + self.dq() * self.y,
            y: -self.y,
        }
    }

    fn same(&self, o: &Self) -> Result<()> {
        if self.d == o.d {
            Ok(())
        } else {
            Err(Error::MixedFields(self.d, o.d))
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(FieldElement {
            d: self.d,
            x: self.x + o.x,
            y: self.y + o.y,
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(FieldElement {
            d: self.d,
            x: self.x - o.x,
            y: self.y - o.y,
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.same(o)?;
        Ok(FieldElement {
            d: self.d,
            x: self.x * o.x - self.n0() * self.y * o.y,
            y: self.x * o.y + o.x * self.y + self.dq() * self.y * o.y,
        })
    }

    pub fn scale(&self, q: Rational) -> Self {
        FieldElement {
            d: self.d,
            x: self.x * q,
            y: self.y * q,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(self.conj().scale(n.recip()))
    }

    /// Splits `self` as `integral / den` with the least positive `den`.
    pub fn as_integral_over(&self) -> (Integral, i128) {
        let den = self.x.denom().lcm(self.y.denom());
        let x = (self.x * Rational::from_integer(den)).to_integer();
        let y = (self.y * Rational::from_integer(den)).to_integer();
        ((x, y), den)
    }

    pub fn is_integral(&self) -> bool {
        self.x.is_integer() && self.y.is_integer()
    }

    pub fn one(field: &ImaginaryQuadraticField) -> Self {
        Self::rational(field, Rational::one())
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    /// Renders as `x+y*w`, dropping zero parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let xs = fmt_rational(&self.x);
        if self.y.is_zero() {
            return write!(f, "{xs}");
        }
        let ys = if self.y == Rational::one() {
            "w".to_string()
        } else if self.y == -Rational::one() {
            "-w".to_string()
        } else {
            format!("{}*w", fmt_rational(&self.y))
        };
        if self.x.is_zero() {
            write!(f, "{ys}")
        } else if ys.starts_with('-') {
            write!(f, "{xs}{ys}")
        } else {
            write!(f, "{xs}+{ys}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_field_laws() {
        let e = ImaginaryQuadraticField::new(-20).unwrap();
        let a = FieldElement::new(&e, Rational::new(1, 2), Rational::from_integer(3));
        let b = FieldElement::new(&e, Rational::from_integer(-2), Rational::new(5, 3));
        assert_eq!(a.mul(&b).unwrap().norm(), a.norm() * b.norm());
        assert_eq!(a.mul(&a.inverse().unwrap()).unwrap(), FieldElement::one(&e));
        assert_eq!(a.conj().conj(), a);
        assert!(a.norm() > Rational::zero());
        let other = ImaginaryQuadraticField::new(-7).unwrap();
        assert_eq!(
            a.add(&FieldElement::one(&other)),
            Err(Error::MixedFields(-20, -7))
        );
        assert_eq!(a.to_string(), "1/2+3*w");
        assert_eq!(b.to_string(), "-2+5/3*w");
    }
}
