//! Sparse multivariate polynomials and cylinder functions.
//!
//! Coordinates are 1-based: exponent vector position `j` refers to
//! coordinate `x_{j+1}`. Exponent vectors are stored with trailing zeros
//! trimmed, so the map key length equals the largest referenced
//! coordinate, and `BTreeMap` iteration gives a canonical lexicographic
//! term order.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `{coeff, exponents}` record of the JSON wire format.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

/// A sparse real polynomial in finitely many coordinates.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Vec<u32>, f64>,
}

fn trim(mut exps: Vec<u32>) -> Vec<u32> {
    while exps.last() == Some(&0) {
        exps.pop();
    }
    exps
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(&[], c);
        p
    }

    /// The coordinate function `x_i`, `i >= 1`.
    pub fn coordinate(i: usize) -> Self {
        assert!(i >= 1, "coordinates are 1-based");
        let mut exps = vec![0u32; i];
        exps[i - 1] = 1;
        let mut p = Self::zero();
        p.add_term(&exps, 1.0);
        p
    }

    pub fn monomial(exponents: &[u32], coeff: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(exponents, coeff);
        p
    }

    pub fn add_term(&mut self, exponents: &[u32], coeff: f64) {
        if coeff == 0.0 {
            return;
        }
        let key = trim(exponents.to_vec());
        let entry = self.terms.entry(key.clone()).or_insert(0.0);
        *entry += coeff;
        if *entry == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|k| k.is_empty())
    }

    /// Constant value if the polynomial has no variable terms.
    pub fn constant_value(&self) -> Option<f64> {
        if self.is_constant() {
            Some(self.terms.get(&Vec::new()).copied().unwrap_or(0.0))
        } else {
            None
        }
    }

    /// Largest referenced coordinate (0 for constants).
    pub fn level(&self) -> usize {
        self.terms.keys().map(|k| k.len()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|k| k.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (exps, c) in other.terms() {
            out.add_term(exps, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero();
        for (exps, c) in self.terms() {
            out.add_term(exps, c * s);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let n = ea.len().max(eb.len());
                let mut exps = vec![0u32; n];
                for (i, &e) in ea.iter().enumerate() {
                    exps[i] += e;
                }
                for (i, &e) in eb.iter().enumerate() {
                    exps[i] += e;
                }
                out.add_term(&exps, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(1.0);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Evaluate at a point covering all referenced coordinates.
    pub fn eval(&self, x: &[f64]) -> f64 {
        debug_assert!(x.len() >= self.level());
        let mut total = 0.0;
        for (exps, c) in self.terms() {
            let mut v = c;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    v *= x[i].powi(e as i32);
                }
            }
            total += v;
        }
        total
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(exps, c)| TermRecord {
                coeff: c,
                exponents: exps.to_vec(),
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord]) -> Self {
        let mut p = Self::zero();
        for r in records {
            p.add_term(&r.exponents, r.coeff);
        }
        p
    }
}

impl Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_records().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        Ok(Self::from_records(&records))
    }
}

/// Body of a cylinder function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum CylinderBody {
    /// A plain polynomial `P`.
    Poly(Polynomial),
    /// `exp(-P)` for a polynomial exponent `P`.
    ExpPoly(Polynomial),
    /// `Q * exp(-P)`.
    Product(Polynomial, Polynomial),
}

/// A function of finitely many coordinates, tagged with the level it is
/// viewed at. The natural level (largest referenced coordinate) is always
/// recomputed from the body; the stored level may only exceed it through
/// [`CylinderFunction::pullback`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderFunction {
    level: usize,
    body: CylinderBody,
}

impl CylinderFunction {
    pub fn from_poly(p: Polynomial) -> Self {
        let level = p.level();
        Self {
            level,
            body: CylinderBody::Poly(p),
        }
    }

    /// `exp(-p)`.
    pub fn exp_neg(p: Polynomial) -> Self {
        let level = p.level();
        Self {
            level,
            body: CylinderBody::ExpPoly(p),
        }
    }

    /// `q * exp(-p)`.
    pub fn product(q: Polynomial, p: Polynomial) -> Self {
        let level = q.level().max(p.level());
        Self {
            level,
            body: CylinderBody::Product(q, p),
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    /// Largest coordinate actually referenced by the body.
    pub fn natural_level(&self) -> usize {
        match &self.body {
            CylinderBody::Poly(p) | CylinderBody::ExpPoly(p) => p.level(),
            CylinderBody::Product(q, p) => q.level().max(p.level()),
        }
    }

    pub fn body(&self) -> &CylinderBody {
        &self.body
    }

    /// Polynomial body, if this is a plain polynomial.
    pub fn as_poly(&self) -> Option<&Polynomial> {
        match &self.body {
            CylinderBody::Poly(p) => Some(p),
            _ => None,
        }
    }

    /// View the same function at a higher level `m >= level`.
    pub fn pullback(&self, m: usize) -> Result<Self> {
        if m < self.level {
            return Err(Error::LevelBelowFunction {
                target: m,
                level: self.level,
            });
        }
        Ok(Self {
            level: m,
            body: self.body.clone(),
        })
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        let need = self.natural_level();
        if x.len() < need {
            return Err(Error::DimensionMismatch {
                expected: need,
                actual: x.len(),
            });
        }
        let v = match &self.body {
            CylinderBody::Poly(p) => p.eval(x),
            CylinderBody::ExpPoly(p) => (-p.eval(x)).exp(),
            CylinderBody::Product(q, p) => q.eval(x) * (-p.eval(x)).exp(),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { index: 0 })
        }
    }

    /// True when the body reduces to a constant.
    pub fn constant_value(&self) -> Option<f64> {
        match &self.body {
            CylinderBody::Poly(p) => p.constant_value(),
            CylinderBody::ExpPoly(p) => p.constant_value().map(|v| (-v).exp()),
            CylinderBody::Product(q, p) => match (q.constant_value(), p.constant_value()) {
                (Some(a), Some(b)) => Some(a * (-b).exp()),
                _ => None,
            },
        }
    }
}

/// Exponent polynomials used inside `exp(-P)` on exact-integration paths
/// must be bounded below. We accept even total degree with every
/// top-degree term having even exponents and a positive coefficient.
pub fn is_bounded_below(p: &Polynomial) -> bool {
    if p.is_constant() {
        return true;
    }
    let top = p.total_degree();
    if top % 2 != 0 {
        return false;
    }
    for (exps, c) in p.terms() {
        let deg: usize = exps.iter().map(|&e| e as usize).sum();
        if deg == top {
            if c <= 0.0 || exps.iter().any(|&e| e % 2 != 0) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> Polynomial {
        Polynomial::coordinate(i)
    }

    #[test]
    fn mul_merges_exponents() {
        let p = x(1).mul(&x(1));
        assert_eq!(p, Polynomial::monomial(&[2], 1.0));
    }

    #[test]
    fn add_cancels_to_sparse_form() {
        let p = x(1).add(&x(2)).add(&x(2).scale(-1.0));
        assert_eq!(p, x(1));
        assert_eq!(p.num_terms(), 1);
    }

    #[test]
    fn scale_by_zero_is_empty() {
        let p = x(1).scale(0.0);
        assert!(p.is_zero());
        assert_eq!(p.num_terms(), 0);
    }

    #[test]
    fn eval_basics() {
        assert_eq!(x(1).add(&x(2)).eval(&[1.0, 2.0]), 3.0);
        assert_eq!(x(1).pow(3).scale(2.0).eval(&[2.0]), 16.0);
        let g = CylinderFunction::exp_neg(x(1).pow(2));
        assert_eq!(g.evaluate(&[0.0]).unwrap(), 1.0);
    }

    #[test]
    fn pullback_keeps_values() {
        let f = CylinderFunction::from_poly(x(1).pow(2));
        assert_eq!(f.level(), 1);
        let g = f.pullback(3).unwrap();
        assert_eq!(g.level(), 3);
        assert_eq!(g.natural_level(), 1);
        assert_eq!(
            f.evaluate(&[1.5]).unwrap(),
            g.evaluate(&[1.5, -2.0, 7.0]).unwrap()
        );
        let c = CylinderFunction::from_poly(Polynomial::constant(1.0));
        assert_eq!(c.pullback(5).unwrap().level(), 5);
        // m = level leaves the object unchanged
        let h = CylinderFunction::from_poly(x(1).mul(&x(2)));
        assert_eq!(h.pullback(2).unwrap(), h);
        assert!(h.pullback(1).is_err());
    }

    #[test]
    fn serialization_is_canonical() {
        let p = x(2).add(&x(1).pow(2)).add(&Polynomial::constant(3.0));
        let json = serde_json::to_string(&p).unwrap();
        let q: Polynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(p, q);
        assert_eq!(json, serde_json::to_string(&q).unwrap());
    }

    #[test]
    fn bounded_below_checks() {
        assert!(is_bounded_below(&x(1).pow(4).add(&x(2).pow(4))));
        assert!(!is_bounded_below(&x(1).pow(3)));
        assert!(!is_bounded_below(&x(1).pow(4).scale(-1.0)));
        // odd cross term at top degree
        assert!(!is_bounded_below(&x(1).mul(&x(2))));
    }
}
