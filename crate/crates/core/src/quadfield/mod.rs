//! Imaginary quadratic fields `E = Q(sqrt d)` with `O_E = Z + Z w`,
//! `w = (d + sqrt d) / 2`, embedded in `C` by `sqrt d -> +i |d|^{1/2}`.

mod classgroup;
mod element;
mod factor;
mod form;
mod ideal;

pub use classgroup::ClassGroup;
pub use element::FieldElement;
pub use factor::{PrimeIdeal, Splitting};
pub use form::BinaryForm;
pub use ideal::OIdeal;

use crate::arith::is_fundamental_discriminant;
use crate::error::{Error, Result};

/// An algebraic integer `x + y w` in coordinates.
pub type Integral = (i128, i128);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ImaginaryQuadraticField {
    d: i64,
    units: Vec<Integral>,
}

impl ImaginaryQuadraticField {
    pub fn new(d: i64) -> Result<Self> {
        if d >= 0 {
            return Err(Error::NotImaginary(d));
        }
        if !is_fundamental_discriminant(d) {
            return Err(Error::NotFundamental(d));
        }
        let mut field = ImaginaryQuadraticField { d, units: vec![] };
        let mut units = vec![];
        // |Re| <= 1 forces |x + y d / 2| <= 1 and |y| <= 2 / sqrt|d|
        for y in -2i128..=2 {
            let centre = (-y * d as i128).div_euclid(2);
            for x in centre - 2..=centre + 2 {
                if field.norm((x, y)) == 1 {
                    units.push((x, y));
                }
            }
        }
        units.sort_by_key(|&u| (u != (1, 0), u));
        field.units = units;
        Ok(field)
    }

    pub fn discriminant(&self) -> i64 {
        self.d
    }

    pub(crate) fn d(&self) -> i128 {
        self.d as i128
    }

    /// Constant term of the minimal polynomial: `w^2 = d w - n0`.
    pub(crate) fn n0(&self) -> i128 {
        let d = self.d();
        (d * d - d) / 4
    }

    pub fn norm(&self, (x, y): Integral) -> i128 {
        x * x + self.d() * x * y + self.n0() * y * y
    }

    pub fn trace(&self, (x, y): Integral) -> i128 {
        2 * x + self.d() * y
    }

    pub fn mul(&self, (x1, y1): Integral, (x2, y2): Integral) -> Integral {
        (
            x1 * x2 - self.n0() * y1 * y2,
            x1 * y2 + x2 * y1 + self.d() * y1 * y2,
        )
    }

    pub fn conj(&self, (x, y): Integral) -> Integral {
        (x + self.d() * y, -y)
    }

    /// `sqrt d = 2w - d`.
    pub fn sqrt_d(&self) -> Integral {
        (-self.d(), 2)
    }

    /// The roots of unity `mu(E)`, starting with 1.
    pub fn roots_of_unity(&self) -> &[Integral] {
        &self.units
    }

    /// The different ideal `(sqrt d)`.
    pub fn different(&self) -> OIdeal {
        OIdeal::principal(self, self.sqrt_d())
    }

    pub fn unit_ideal(&self) -> OIdeal {
        OIdeal::one(self)
    }

    /// Minkowski bound `(2/pi) sqrt|d|`, rounded up.
    pub fn minkowski_bound(&self) -> u64 {
        (2.0 / std::f64::consts::PI * (self.d.unsigned_abs() as f64).sqrt()).ceil() as u64
    }

    pub(crate) fn check_same(&self, other: i64) -> Result<()> {
        if self.d == other {
            Ok(())
        } else {
            Err(Error::MixedFields(self.d, other))
        }
    }
}

/// All fundamental discriminants `d` with `-bound <= d < 0`, in decreasing order.
pub fn fundamental_discriminants(bound: u64) -> Vec<i64> {
    (1..=bound as i64)
        .map(|n| -n)
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}
