//! Types `(I, α)` of principal CM K3 surfaces over an imaginary quadratic
//! field, their transcendental lattices and discriminant ideals.

use crate::abelian::FiniteAbelianGroup;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::quadfield::{
    BinaryForm, ClassGroup, FieldElement, ImaginaryQuadraticField, Integral, OIdeal,
};
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

/// The transcendental lattice `(I, tr(α x ȳ))` with `α > 0` rational.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct K3Type {
    field: ImaginaryQuadraticField,
    ideal: OIdeal,
    alpha: Rational,
}

impl K3Type {
    /// Validates that the trace pairing is integral and even on `ideal`.
    pub fn new(field: &ImaginaryQuadraticField, ideal: OIdeal, alpha: Rational) -> Result<Self> {
        field.check_same(ideal.discriminant())?;
        if alpha <= Rational::zero() {
            return Err(Error::NotPositiveDefinite);
        }
        // tr(α x x̄) = 2 α Nm(x) is even on I iff α Nm(I) is an integer
        if !(alpha * ideal.norm()).is_integer() {
            return Err(Error::NotIntegralPairing);
        }
        Ok(K3Type {
            field: field.clone(),
            ideal,
            alpha,
        })
    }

    pub fn field(&self) -> &ImaginaryQuadraticField {
        &self.field
    }

    pub fn ideal(&self) -> &OIdeal {
        &self.ideal
    }

    pub fn alpha(&self) -> Rational {
        self.alpha
    }

    /// `α Nm(I)`, a positive integer invariant under equivalence.
    pub fn scale(&self) -> i128 {
        (self.alpha * self.ideal.norm()).to_integer()
    }

    /// The binary quadratic form `x ↦ α Nm(x)` on the stored basis of `I`.
    fn trace_form(&self) -> BinaryForm {
        // Nm on the basis of I is Nm(I) times the primitive norm form
        let r = self.scale();
        let f = self.field.ideal_form(&self.ideal);
        BinaryForm::new(r * f.a, r * f.b, r * f.c)
    }

    /// Gram matrix of `tr(α x ȳ)` on a reduced, positively oriented Z-basis of `I`.
    pub fn gram(&self) -> IntMatrix {
        let (g, _) = self.trace_form().reduce();
        vec![vec![2 * g.a, g.b], vec![g.b, 2 * g.c]]
    }

    /// The Z-basis of `I` on which `gram` is computed.
    pub fn reduced_basis(&self) -> [FieldElement; 2] {
        let (_, m) = self.trace_form().reduce();
        let [e1, e2] = self.ideal.z_basis(&self.field);
        let lin = |p: i128, q: i128| {
            e1.scale(p.into())
                .add(&e2.scale(q.into()))
                .expect("same field")
        };
        [lin(m[0][0], m[1][0]), lin(m[0][1], m[1][1])]
    }

    pub fn lattice(&self) -> IntegerLattice {
        IntegerLattice::new(self.gram()).expect("symmetric")
    }

    /// `D_X = (α) I Ī D_E`.
    pub fn discriminant_ideal(&self) -> OIdeal {
        let f = &self.field;
        self.ideal
            .mul(&self.ideal.conj(f), f)
            .and_then(|n| n.mul(&f.different(), f))
            .expect("same field")
            .scale(self.alpha, f)
    }

    /// Whether `μ(E)` injects into `(O/D_X)^×`.
    pub fn has_big_discriminant(&self) -> bool {
        kernel_k_i(&self.field, &self.discriminant_ideal())
            .map(|k| k.len() == 1)
            .unwrap_or(false)
    }

    /// Equivalence: `J = e^{-1} I` and `β = e ē α` for some `e ∈ E^×`.
    pub fn equivalent(&self, o: &K3Type) -> Result<bool> {
        let f = &self.field;
        f.check_same(o.field.discriminant())?;
        let q = self.ideal.div(&o.ideal, f)?;
        Ok(match f.principal_generator(&q) {
            Some(e) => e.norm() == o.alpha / self.alpha,
            None => false,
        })
    }

    /// The equivalent type whose ideal is the least-norm integral ideal of its class.
    pub fn normalized(&self) -> K3Type {
        let cl = ClassGroup::new(&self.field);
        self.normalized_in(&cl)
    }

    pub fn normalized_in(&self, cl: &ClassGroup) -> K3Type {
        let rep = cl.representative(cl.class_index(&self.ideal)).clone();
        let alpha = Rational::from_integer(self.scale()) / rep.norm();
        K3Type {
            field: self.field.clone(),
            ideal: rep,
            alpha,
        }
    }

    /// Compares `|A_T|` and its structure with `O_E / D_X`.
    pub fn check_disc_group_iso(&self) -> DiscGroupReport {
        let a_t = self
            .lattice()
            .discriminant_form()
            .expect("type lattices are even and definite")
            .group()
            .clone();
        let dx = self.discriminant_ideal();
        let quotient = quotient_structure(&dx);
        let norm = dx.norm().to_integer() as u128;
        DiscGroupReport {
            pass: a_t == quotient && a_t.order() == norm,
            lattice_group: a_t,
            quotient_group: quotient,
            norm,
        }
    }
}

/// Structure of `O / I` for an integral ideal `I`.
pub fn quotient_structure(ideal: &OIdeal) -> FiniteAbelianGroup {
    debug_assert!(ideal.is_integral());
    let [(p, _), (q, r)] = ideal.scaled_basis();
    let s = smith_normal_form(&vec![vec![p, 0], vec![q, r]]);
    FiniteAbelianGroup::from_orders(&s.diagonal().iter().map(|&x| x as i64).collect::<Vec<_>>())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscGroupReport {
    pub lattice_group: FiniteAbelianGroup,
    pub quotient_group: FiniteAbelianGroup,
    /// `Nm(D_X)`.
    pub norm: u128,
    pub pass: bool,
}

impl fmt::Display for K3Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = if self.alpha.is_integer() {
            self.alpha.numer().to_string()
        } else {
            format!("{}/{}", self.alpha.numer(), self.alpha.denom())
        };
        write!(
            f,
            "d={}; I={}; alpha={}",
            self.field.discriminant(),
            self.ideal,
            a
        )
    }
}

/// Reads the type of an even positive-definite rank-2 Gram matrix.
///
/// The Gram basis is taken as positively oriented, so `[[A,B],[B,C]]` and
/// `[[C,B],[B,A]]` give conjugate ideals.
pub fn extract_type(gram: &IntMatrix) -> Result<K3Type> {
    let l = IntegerLattice::new(gram.clone())?;
    if l.rank() != 2 {
        return Err(Error::Shape(format!(
            "expected a 2x2 Gram matrix, got rank {}",
            l.rank()
        )));
    }
    if !l.is_even() {
        return Err(Error::NotEven);
    }
    let (ga, gb, gc) = (gram[0][0], gram[0][1], gram[1][1]);
    if ga <= 0 || ga * gc - gb * gb <= 0 {
        return Err(Error::NotPositiveDefinite);
    }
    let form = BinaryForm::new(ga / 2, gb, gc / 2);
    let g = form.content();
    let p = BinaryForm::new(form.a / g, form.b / g, form.c / g);
    let d = p.discriminant();
    let d64 = i64::try_from(d).map_err(|_| Error::NonMaximalOrder(i64::MIN))?;
    let field = match ImaginaryQuadraticField::new(d64) {
        Ok(f) => f,
        Err(Error::NotFundamental(_)) => return Err(Error::NonMaximalOrder(d64)),
        Err(e) => return Err(e),
    };
    let ideal = field.form_ideal(&p);
    K3Type::new(&field, ideal, Rational::new(g, p.a))
}

/// Gram matrix of a type.
pub fn gram_of_type(t: &K3Type) -> IntMatrix {
    t.gram()
}

/// `K_I = {ζ ∈ μ(E) : ζ - 1 ∈ I}`.
pub fn kernel_k_i(field: &ImaginaryQuadraticField, ideal: &OIdeal) -> Result<Vec<Integral>> {
    field.check_same(ideal.discriminant())?;
    if !ideal.is_integral() {
        return Err(Error::NotIntegral);
    }
    Ok(field
        .roots_of_unity()
        .iter()
        .copied()
        .filter(|&(x, y)| ideal.contains_integral((x - 1, y)))
        .collect())
}

/// All types with `Nm(D_X) <= norm_bound`, one per equivalence class,
/// sorted by `Nm(D_X)` and then by ideal.
pub fn enumerate_types(field: &ImaginaryQuadraticField, norm_bound: u128) -> Vec<K3Type> {
    let cl = ClassGroup::new(field);
    enumerate_types_in(&cl, norm_bound)
}

pub fn enumerate_types_in(cl: &ClassGroup, norm_bound: u128) -> Vec<K3Type> {
    let field = cl.field();
    let dd = field.discriminant().unsigned_abs() as u128;
    // Nm(D_X) = r^2 |d| for r = α Nm(I)
    let mut out = vec![];
    let mut r: u128 = 1;
    while r * r * dd <= norm_bound {
        for k in 0..cl.order() {
            let rep = cl.representative(k).clone();
            let alpha = Rational::from_integer(r as i128) / rep.norm();
            out.push(K3Type {
                field: field.clone(),
                ideal: rep,
                alpha,
            });
        }
        r += 1;
    }
    out.sort_by(|a, b| (a.scale(), a.ideal.triple()).cmp(&(b.scale(), b.ideal.triple())));
    out
}

/// Types over `E` without big discriminant.
pub fn enumerate_non_big(field: &ImaginaryQuadraticField) -> Vec<K3Type> {
    // ζ - 1 ∈ D_X forces Nm(D_X) <= Nm(ζ - 1) <= 4
    let bound = field
        .roots_of_unity()
        .iter()
        .filter(|&&z| z != (1, 0))
        .map(|&(x, y)| field.norm((x - 1, y)) as u128)
        .max()
        .unwrap_or(0);
    enumerate_types(field, bound)
        .into_iter()
        .filter(|t| !t.has_big_discriminant())
        .collect()
}
