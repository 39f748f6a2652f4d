use super::{BinaryForm, FieldElement, ImaginaryQuadraticField, OIdeal};
use crate::abelian::{enumerate_group, FiniteAbelianGroup, GroupLaw};
use crate::arith::{primes, Rational};
use std::collections::HashMap;

impl ImaginaryQuadraticField {
    /// Norm form of the primitive part of `ideal` on the oriented basis `(a, b + w)`.
    pub fn ideal_form(&self, ideal: &OIdeal) -> BinaryForm {
        let (_, a, b, _) = ideal.triple();
        BinaryForm::new(a, 2 * b + self.d(), self.norm((b, 1)) / a)
    }

    /// The primitive ideal whose oriented norm form is `f`.
    pub fn form_ideal(&self, f: &BinaryForm) -> OIdeal {
        debug_assert_eq!(f.discriminant(), self.d());
        let b = ((f.b - self.d()) / 2).rem_euclid(f.a);
        OIdeal::from_triple(self, 1, f.a, b, 1).expect("form of the field discriminant")
    }

    /// The reduced form representing the class of `ideal`.
    pub fn class_form(&self, ideal: &OIdeal) -> BinaryForm {
        self.ideal_form(ideal).reduce().0
    }

    /// A generator of `ideal` if it is principal.
    pub fn principal_generator(&self, ideal: &OIdeal) -> Option<FieldElement> {
        let f = self.ideal_form(ideal);
        let (g, m) = f.reduce();
        if g.a != 1 {
            return None;
        }
        let (den, a, b, c) = ideal.triple();
        // first reduced basis vector m00 * a + m10 * (b + w) has norm a
        let v = (m[0][0] * a + m[1][0] * b, m[1][0]);
        debug_assert_eq!(self.norm(v), a);
        Some(FieldElement::from_integral(self, v).scale(Rational::new(c, den)))
    }

    pub fn is_principal(&self, ideal: &OIdeal) -> bool {
        self.class_form(ideal).a == 1
    }
}

/// The ideal class group `Cl(E)`, with classes indexed by reduced forms.
#[derive(Debug, Clone)]
pub struct ClassGroup {
    field: ImaginaryQuadraticField,
    forms: Vec<BinaryForm>,
    index: HashMap<BinaryForm, usize>,
    reps: Vec<OIdeal>,
    structure: FiniteAbelianGroup,
    logs: Vec<Vec<i64>>,
    generators: Vec<OIdeal>,
}

struct ClassLaw<'a> {
    field: &'a ImaginaryQuadraticField,
    index: &'a HashMap<BinaryForm, usize>,
    reps: &'a [OIdeal],
}

impl ClassLaw<'_> {
    fn class(&self, ideal: &OIdeal) -> usize {
        self.index[&self.field.class_form(ideal)]
    }
}

impl GroupLaw for ClassLaw<'_> {
    type Elem = usize;
    fn identity(&self) -> usize {
        0
    }
    fn op(&self, a: &usize, b: &usize) -> usize {
        let p = self.reps[*a]
            .mul(&self.reps[*b], self.field)
            .expect("same field");
        self.class(&p)
    }
}

impl ClassGroup {
    pub fn new(field: &ImaginaryQuadraticField) -> Self {
        let forms = BinaryForm::reduced_forms(field.d());
        debug_assert_eq!(forms[0].a, 1);
        let index: HashMap<BinaryForm, usize> =
            forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let reps: Vec<OIdeal> = forms.iter().map(|f| field.form_ideal(f)).collect();
        let law = ClassLaw {
            field,
            index: &index,
            reps: &reps,
        };
        let bound = field.minkowski_bound();
        let candidates: Vec<usize> = primes()
            .take_while(|&p| p <= bound)
            .flat_map(|p| field.primes_above(p))
            .map(|q| law.class(&q.ideal))
            .collect();
        let e = enumerate_group(&law, candidates);
        let mut logs = vec![vec![]; forms.len()];
        for (k, v) in &e.logs {
            logs[*k] = v.clone();
        }
        // label each invariant generator by the least prime ideal in its class
        let mut generators = vec![];
        for &g in &e.generators {
            let label = primes()
                .flat_map(|p| field.primes_above(p))
                .find(|q| law.class(&q.ideal) == g)
                .expect("every class contains prime ideals");
            generators.push(label.ideal);
        }
        ClassGroup {
            field: field.clone(),
            forms,
            index,
            reps,
            structure: e.structure,
            logs,
            generators,
        }
    }

    pub fn field(&self) -> &ImaginaryQuadraticField {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.forms.len()
    }

    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    /// Reduced forms, one per class; index 0 is the principal class.
    pub fn forms(&self) -> &[BinaryForm] {
        &self.forms
    }

    /// Number of classes reached from the generators (equals `order` when
    /// the relation lattice is complete).
    pub fn relation_order(&self) -> u128 {
        self.structure.order()
    }

    /// Prime ideals realizing the invariant generators.
    pub fn generators(&self) -> &[OIdeal] {
        &self.generators
    }

    pub fn class_index(&self, ideal: &OIdeal) -> usize {
        self.index[&self.field.class_form(ideal)]
    }

    /// The primitive ideal of the reduced form of class `k`; it has least
    /// norm among integral ideals of that class.
    pub fn representative(&self, k: usize) -> &OIdeal {
        &self.reps[k]
    }

    pub fn log(&self, ideal: &OIdeal) -> Vec<i64> {
        self.logs[self.class_index(ideal)].clone()
    }

    pub fn log_of_class(&self, k: usize) -> &[i64] {
        &self.logs[k]
    }

    /// Class index with the given invariant coordinates.
    pub fn class_of_log(&self, v: &[i64]) -> usize {
        let v = self.structure.reduce(v);
        self.logs
            .iter()
            .position(|l| *l == v)
            .expect("log in range")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::fundamental_discriminants;

    fn elt(e: &ImaginaryQuadraticField, x: i128, y: i128) -> FieldElement {
        FieldElement::from_integral(e, (x, y))
    }

    #[test]
    fn class_group_examples() {
        let g = ClassGroup::new(&ImaginaryQuadraticField::new(-4).unwrap());
        assert_eq!(g.structure().divisors(), &[] as &[i64]);
        let g = ClassGroup::new(&ImaginaryQuadraticField::new(-20).unwrap());
        assert_eq!(g.structure().divisors(), &[2]);
        assert_eq!(
            g.forms(),
            &[BinaryForm::new(1, 0, 5), BinaryForm::new(2, 2, 3)]
        );
        let g = ClassGroup::new(&ImaginaryQuadraticField::new(-23).unwrap());
        assert_eq!(g.structure().divisors(), &[3]);
        assert_eq!(g.generators().len(), 1);
        assert_eq!(g.generators()[0].norm(), 2.into());
    }

    #[test]
    fn principality_examples() {
        let gauss = ImaginaryQuadraticField::new(-4).unwrap();
        // 1 + i = 3 + w
        let p = OIdeal::generated_by(&gauss, &[elt(&gauss, 2, 0), elt(&gauss, 3, 1)]).unwrap();
        let g = gauss.principal_generator(&p).unwrap();
        assert_eq!(g.norm(), 2.into());
        assert_eq!(OIdeal::principal_element(&gauss, &g).unwrap(), p);

        let e5 = ImaginaryQuadraticField::new(-20).unwrap();
        let p = OIdeal::generated_by(&e5, &[elt(&e5, 2, 0), elt(&e5, 11, 1)]).unwrap();
        assert_eq!(e5.principal_generator(&p), None);

        for d in [-3, -7, -23] {
            let e = ImaginaryQuadraticField::new(d).unwrap();
            assert_eq!(
                e.principal_generator(&OIdeal::one(&e)),
                Some(FieldElement::one(&e))
            );
        }
    }

    #[test]
    fn principal_generators_of_fractional_ideals() {
        let e = ImaginaryQuadraticField::new(-23).unwrap();
        for x in -6..6 {
            for y in -6..6 {
                if (x, y) == (0, 0) {
                    continue;
                }
                let g = FieldElement::new(&e, Rational::new(x, 3), Rational::new(y, 5));
                let i = OIdeal::principal_element(&e, &g).unwrap();
                let h = e.principal_generator(&i).expect("principal");
                assert_eq!(OIdeal::principal_element(&e, &h).unwrap(), i);
                assert_eq!(h.norm(), g.norm());
            }
        }
    }

    #[test]
    fn logs_are_homomorphic() {
        for d in [-23, -47, -84, -71, -260] {
            let e = ImaginaryQuadraticField::new(d).unwrap();
            let cl = ClassGroup::new(&e);
            let ideals: Vec<OIdeal> = primes()
                .take(12)
                .flat_map(|p| e.primes_above(p))
                .map(|q| q.ideal)
                .collect();
            for i in &ideals {
                for j in &ideals {
                    let ij = i.mul(j, &e).unwrap();
                    assert_eq!(cl.structure().add(&cl.log(i), &cl.log(j)), cl.log(&ij));
                }
                let inv = i.inverse(&e);
                assert_eq!(
                    cl.structure().add(&cl.log(i), &cl.log(&inv)),
                    cl.structure().zero()
                );
            }
        }
    }

    #[test]
    fn class_numbers_agree_up_to_2000() {
        for d in fundamental_discriminants(2000) {
            let e = ImaginaryQuadraticField::new(d).unwrap();
            let cl = ClassGroup::new(&e);
            assert_eq!(cl.relation_order(), cl.order() as u128, "d = {d}");
            for (k, f) in cl.forms().iter().enumerate() {
                assert_eq!(cl.class_index(cl.representative(k)), k);
                assert_eq!(e.class_form(cl.representative(k)), *f);
            }
        }
    }
}
