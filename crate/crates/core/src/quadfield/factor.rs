use super::{ImaginaryQuadraticField, OIdeal};
use crate::arith::{factor, inv_mod, kronecker_prime, sqrt_mod_prime, Limits};
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    /// The rational prime below.
    pub p: u64,
    pub ideal: OIdeal,
    pub splitting: Splitting,
}

impl PrimeIdeal {
    pub fn norm(&self) -> u128 {
        match self.splitting {
            Splitting::Inert => self.p as u128 * self.p as u128,
            _ => self.p as u128,
        }
    }
}

impl ImaginaryQuadraticField {
    /// Roots of `x^2 - d x + n0` (the minimal polynomial of `w`) modulo `p`.
    fn omega_roots(&self, p: u64) -> Vec<i128> {
        let pi = p as i128;
        if p == 2 {
            return (0..2)
                .filter(|&x| (x * x - self.d() * x + self.n0()).rem_euclid(2) == 0)
                .collect();
        }
        let Some(t) = sqrt_mod_prime(self.d(), p) else {
            return vec![];
        };
        let half = inv_mod(2, pi).expect("odd prime");
        let mut roots: Vec<i128> = [t as i128, -(t as i128)]
            .iter()
            .map(|&s| ((self.d() + s) * half).rem_euclid(pi))
            .collect();
        roots.sort_unstable();
        roots.dedup();
        roots
    }

    /// The prime ideals above the rational prime `p`, in canonical order.
    pub fn primes_above(&self, p: u64) -> Vec<PrimeIdeal> {
        let splitting = match kronecker_prime(self.d(), p) {
            1 => Splitting::Split,
            0 => Splitting::Ramified,
            _ => Splitting::Inert,
        };
        if splitting == Splitting::Inert {
            return vec![PrimeIdeal {
                p,
                ideal: OIdeal::from_integer(self, p as i128),
                splitting,
            }];
        }
        let pi = p as i128;
        let mut out: Vec<PrimeIdeal> = self
            .omega_roots(p)
            .into_iter()
            .map(|rho| PrimeIdeal {
                p,
                // (p, w - rho)
                ideal: OIdeal::from_triple(self, 1, pi, (-rho).rem_euclid(pi), 1)
                    .expect("root of the minimal polynomial gives an ideal"),
                splitting,
            })
            .collect();
        out.sort_by(|a, b| a.ideal.cmp(&b.ideal));
        debug_assert_eq!(out.len(), if splitting == Splitting::Split { 2 } else { 1 });
        out
    }

    /// Prime factorization of a nonzero integral ideal.
    pub fn factor_ideal(&self, ideal: &OIdeal, limits: &Limits) -> Result<Vec<(PrimeIdeal, u32)>> {
        if !ideal.is_integral() {
            return Err(Error::NotIntegral);
        }
        let (_, a, _, c) = ideal.triple();
        let mut primes: Vec<u64> = factor(a as u128, limits)?
            .into_iter()
            .chain(factor(c as u128, limits)?)
            .map(|(p, _)| p)
            .collect();
        primes.sort_unstable();
        primes.dedup();
        let mut rest = ideal.clone();
        let mut out = vec![];
        for p in primes {
            for q in self.primes_above(p) {
                let mut e = 0u32;
                let inv = q.ideal.inverse(self);
                while rest.is_subset_of(&q.ideal, self)? {
                    rest = rest.mul(&inv, self)?;
                    e += 1;
                }
                if e > 0 {
                    out.push((q, e));
                }
            }
        }
        debug_assert_eq!(rest, OIdeal::one(self));
        Ok(out)
    }

    /// `|(O/I)^×| = Nm(I) · prod (1 - 1/Nm p)`.
    pub fn totient(&self, ideal: &OIdeal, limits: &Limits) -> Result<u128> {
        let mut phi = ideal.norm_int() as u128;
        for (q, _) in self.factor_ideal(ideal, limits)? {
            let n = q.norm();
            phi = phi / n * (n - 1);
        }
        Ok(phi)
    }
}
