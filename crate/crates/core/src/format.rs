//! Text formats for elements, ideals, types and Gram matrices.
//!
//! * element: a sum of terms `c`, `c*w` or `cw` with rational `c`, where the
//!   atom is `w` (the generator `(d + √d)/2`), `s` or `sqrt(d)` for `√d`, or
//!   `i` when `d = -4`; e.g. `1/2+3*w`, `2i+7`.
//! * ideal: `den:[a,b,c]` in Hermite form or a generator list `(g1,g2,...)`.
//! * type: `d=<int>; I=<ideal>; alpha=p/q`.
//! * Gram matrix: `8,0;0,8` or `{"rank":2,"gram":[[8,0],[0,8]]}`.

use crate::abelian::FiniteAbelianGroup;
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::k3type::K3Type;
use crate::matrix::IntMatrix;
use crate::quadfield::{FieldElement, ImaginaryQuadraticField, OIdeal};
use num_traits::Zero;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || perr(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn atom(field: &ImaginaryQuadraticField, name: &str) -> Result<FieldElement> {
    let d = field.discriminant();
    let sqrt_d = |f| FieldElement::from_integral(f, field.sqrt_d());
    match name {
        "w" => Ok(FieldElement::from_integral(field, (0, 1))),
        "s" => Ok(sqrt_d(field)),
        "i" if d == -4 => Ok(FieldElement::from_integral(field, (2, 1))),
        _ => {
            let inner = name
                .strip_prefix("sqrt(")
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(|| perr(format!("unknown symbol {name:?}")))?;
            let n: i64 = inner
                .trim()
                .parse()
                .map_err(|_| perr(format!("bad radicand {inner:?}")))?;
            if n == d {
                Ok(sqrt_d(field))
            } else if 4 * n == d {
                Ok(sqrt_d(field).scale(Rational::new(1, 2)))
            } else {
                Err(perr(format!(
                    "sqrt({n}) does not generate the field of discriminant {d}"
                )))
            }
        }
    }
}

fn term(field: &ImaginaryQuadraticField, t: &str) -> Result<FieldElement> {
    let t = t.trim();
    if t.is_empty() {
        return Err(perr("empty term"));
    }
    let split = t.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(t.len());
    let (coef, sym) = t.split_at(split);
    let coef = coef.trim().trim_end_matches('*').trim();
    let c = match coef {
        "" | "+" => Rational::from_integer(1),
        "-" => Rational::from_integer(-1),
        _ => parse_rational(coef)?,
    };
    if sym.is_empty() {
        return Ok(FieldElement::rational(field, c));
    }
    Ok(atom(field, sym.trim())?.scale(c))
}

pub fn parse_element(field: &ImaginaryQuadraticField, s: &str) -> Result<FieldElement> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(perr("empty element"));
    }
    // split at top-level signs, keeping "sqrt(-7)" intact
    let mut terms = vec![];
    let mut depth = 0;
    let mut start = 0;
    let bytes = s.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start && !matches!(bytes[i - 1], b'*' | b'/') => {
                terms.push(&s[start..i]);
                start = i;
            }
            _ => {}
        }
    }
    terms.push(&s[start..]);
    let mut acc = FieldElement::rational(field, Rational::zero());
    for t in terms {
        acc = acc.add(&term(field, t)?)?;
    }
    Ok(acc)
}

pub fn parse_ideal(field: &ImaginaryQuadraticField, s: &str) -> Result<OIdeal> {
    let s = s.trim();
    if let Some((den, rest)) = s.split_once(':') {
        let inner = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| perr(format!("expected den:[a,b,c], got {s:?}")))?;
        let nums: Vec<i128> = inner
            .split(',')
            .map(|x| {
                x.trim()
                    .parse()
                    .map_err(|_| perr(format!("bad integer {x:?}")))
            })
            .collect::<Result<_>>()?;
        let den: i128 = den
            .trim()
            .parse()
            .map_err(|_| perr(format!("bad denominator {den:?}")))?;
        let [a, b, c] = nums[..] else {
            return Err(perr("expected three entries in [a,b,c]"));
        };
        if den <= 0 || a <= 0 || c <= 0 {
            return Err(perr("den, a and c must be positive"));
        }
        return OIdeal::from_triple(field, den, a, b, c).map_err(|e| match e {
            Error::Parse(_) => e,
            _ => perr(format!("{s:?} is not an ideal in Hermite form: {e}")),
        });
    }
    let inner = s
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| perr(format!("expected den:[a,b,c] or (g1,...), got {s:?}")))?;
    let mut gens = vec![];
    let mut depth = 0;
    let mut start = 0;
    for (i, ch) in inner.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                gens.push(parse_element(field, &inner[start..i])?);
                start = i + 1;
            }
            _ => {}
        }
    }
    gens.push(parse_element(field, &inner[start..])?);
    OIdeal::generated_by(field, &gens)
}

pub fn parse_type(s: &str) -> Result<K3Type> {
    let mut d = None;
    let mut ideal = None;
    let mut alpha = None;
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| perr(format!("expected key=value, got {part:?}")))?;
        match k.trim() {
            "d" => {
                d = Some(
                    v.trim()
                        .parse::<i64>()
                        .map_err(|_| perr(format!("bad discriminant {v:?}")))?,
                )
            }
            "I" => ideal = Some(v.trim().to_string()),
            "alpha" => alpha = Some(parse_rational(v)?),
            other => return Err(perr(format!("unknown key {other:?}"))),
        }
    }
    let d = d.ok_or_else(|| perr("missing d"))?;
    let field = ImaginaryQuadraticField::new(d)?;
    let ideal = parse_ideal(&field, ideal.as_deref().unwrap_or("1:[1,0,1]"))?;
    K3Type::new(&field, ideal, alpha.ok_or_else(|| perr("missing alpha"))?)
}

#[derive(serde::Deserialize)]
struct GramJson {
    rank: usize,
    gram: Vec<Vec<i128>>,
}

pub fn parse_gram(s: &str) -> Result<IntMatrix> {
    let s = s.trim();
    if s.starts_with('{') {
        let g: GramJson =
            serde_json::from_str(s).map_err(|e| perr(format!("bad Gram JSON: {e}")))?;
        if g.gram.len() != g.rank || g.gram.iter().any(|r| r.len() != g.rank) {
            return Err(Error::Shape(format!(
                "Gram matrix does not have rank {}",
                g.rank
            )));
        }
        return Ok(g.gram);
    }
    let rows: IntMatrix = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| perr(format!("bad integer {x:?}")))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::Shape("Gram matrix is not square".into()));
    }
    Ok(rows)
}

pub fn gram_to_string(g: &IntMatrix) -> String {
    g.iter()
        .map(|r| {
            r.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Letter names `a, b, c, ...` for generators (`g1, g2, ...` past 26).
pub fn generator_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect()
    } else {
        (1..=n).map(|i| format!("g{i}")).collect()
    }
}

/// A group element as a word in the generator names, e.g. `a·b^3`.
pub fn word(group: &FiniteAbelianGroup, x: &[i64]) -> String {
    let names = generator_names(group.rank());
    let parts: Vec<String> = group
        .reduce(x)
        .iter()
        .zip(&names)
        .filter(|(e, _)| **e != 0)
        .map(|(&e, n)| {
            if e == 1 {
                n.clone()
            } else {
                format!("{n}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

/// `a→a, b→a·b` for an endomorphism given by columns.
pub fn render_endomorphism(group: &FiniteAbelianGroup, cols: &[Vec<i64>]) -> String {
    if group.rank() == 0 {
        return "identity".into();
    }
    generator_names(group.rank())
        .iter()
        .zip(cols)
        .map(|(n, c)| format!("{n}→{}", word(group, c)))
        .collect::<Vec<_>>()
        .join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(d: i64) -> ImaginaryQuadraticField {
        ImaginaryQuadraticField::new(d).unwrap()
    }

    #[test]
    fn elements() {
        let g = field(-4);
        let e = |s| parse_element(&g, s).unwrap();
        assert_eq!(e("2i+7"), FieldElement::from_integral(&g, (11, 2)));
        assert_eq!(e("7 + 2*i"), e("11+2*w"));
        assert_eq!(e("sqrt(-4)"), e("2i"));
        assert_eq!(e("sqrt(-1)"), e("i"));
        assert_eq!(e("s"), e("2*i"));
        assert_eq!(e("-w"), FieldElement::from_integral(&g, (0, -1)));
        let f = field(-7);
        let x = parse_element(&f, "1/2+3*w").unwrap();
        assert_eq!(x, FieldElement::new(&f, Rational::new(1, 2), 3.into()));
        assert_eq!(x.to_string(), "1/2+3*w");
        assert_eq!(parse_element(&f, &x.to_string()).unwrap(), x);
        assert_eq!(
            parse_element(&f, "-1/3*w-2").unwrap().to_string(),
            "-2-1/3*w"
        );
        assert!(parse_element(&f, "i").is_err());
        assert!(parse_element(&f, "2x").is_err());
        assert!(parse_element(&f, "").is_err());
    }

    #[test]
    fn ideals() {
        let g = field(-4);
        let eight = parse_ideal(&g, "(8)").unwrap();
        assert_eq!(eight, OIdeal::from_integer(&g, 8));
        assert_eq!(parse_ideal(&g, &eight.to_string()).unwrap(), eight);
        assert_eq!(
            parse_ideal(&g, "(2, 1+i)").unwrap(),
            OIdeal::principal(&g, (3, 1))
        );
        let f = field(-7);
        assert_eq!(parse_ideal(&f, "(sqrt(-7))").unwrap(), f.different());
        assert_eq!(parse_ideal(&f, "1:[1,0,1]").unwrap(), OIdeal::one(&f));
        assert!(matches!(parse_ideal(&f, "1:[1,0]"), Err(Error::Parse(_))));
        assert!(matches!(parse_ideal(&f, "1:[3,0,1]"), Err(Error::Parse(_))));
        assert!(parse_ideal(&f, "8").is_err());
    }

    #[test]
    fn types_and_grams() {
        let t = parse_type("d=-7; I=1:[1,0,1]; alpha=1").unwrap();
        assert_eq!(parse_type(&t.to_string()).unwrap(), t);
        let t = parse_type("d=-4; I=(2,1+i); alpha=1/2").unwrap();
        assert_eq!(t.scale(), 1);
        assert!(matches!(
            parse_type("d=-5; alpha=1"),
            Err(Error::NotFundamental(-5))
        ));
        assert!(matches!(parse_type("d=-7"), Err(Error::Parse(_))));
        assert_eq!(parse_gram("8,0;0,8").unwrap(), vec![vec![8, 0], vec![0, 8]]);
        assert_eq!(
            parse_gram(r#"{"rank":2,"gram":[[2,1],[1,2]]}"#).unwrap(),
            vec![vec![2, 1], vec![1, 2]]
        );
        assert!(matches!(
            parse_gram(r#"{"rank":3,"gram":[[2,1],[1,2]]}"#),
            Err(Error::Shape(_))
        ));
        assert!(matches!(parse_gram("1,2;3"), Err(Error::Shape(_))));
        assert!(matches!(parse_gram("a,b"), Err(Error::Parse(_))));
        assert_eq!(
            gram_to_string(&parse_gram("8, 0; 0, 8").unwrap()),
            "8,0;0,8"
        );
    }

    #[test]
    fn words() {
        let g = FiniteAbelianGroup::from_orders(&[2, 4]);
        assert_eq!(
            render_endomorphism(&g, &[vec![1, 0], vec![1, 1]]),
            "a→a, b→a·b"
        );
        assert_eq!(word(&g, &[0, 3]), "b^3");
        assert_eq!(word(&g, &[2, 4]), "1");
    }
}
