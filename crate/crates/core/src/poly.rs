//! Weighted-homogeneous polynomials in four variables over a prime field.
//!
//! A [`Polynomial`] is a sorted term list, descending in the ring's monomial
//! order, with no zero coefficients and no repeated monomials. Polynomials do
//! not carry their ring; every operation goes through a [`PolyRing`], which
//! owns the field, the variable names and the grading.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Number of ambient variables. The hypersurfaces handled here live in
/// four-dimensional affine space, so `dim R = 3`.
pub const NVARS: usize = 4;

/// A monomial `x^a y^b z^c w^d` together with its weighted degree.
///
/// The ordering is weighted graded reverse lexicographic with the variable
/// sequence as tiebreak: higher weighted degree first, then the monomial with
/// the smaller exponent in the last variable that differs is larger.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial {
    deg: u32,
    exps: [u16; NVARS],
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        deg: 0,
        exps: [0; NVARS],
    };

    #[inline]
    pub fn exponents(&self) -> &[u16; NVARS] {
        &self.exps
    }

    /// Weighted degree under the weights this monomial was built with.
    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg
    }

    /// Unweighted total degree.
    #[inline]
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.exps == [0; NVARS]
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (e, o) in exps.iter_mut().zip(other.exps.iter()) {
            *e = e.checked_add(*o).expect("exponent overflow");
        }
        Monomial {
            deg: self.deg + other.deg,
            exps,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming divisibility.
    #[inline]
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut exps = other.exps;
        for (e, s) in exps.iter_mut().zip(self.exps.iter()) {
            *e -= *s;
        }
        Monomial {
            deg: other.deg - self.deg,
            exps,
        }
    }

    pub fn lcm(&self, other: &Monomial, weights: &[u32; NVARS]) -> Monomial {
        let mut exps = [0u16; NVARS];
        for i in 0..NVARS {
            exps[i] = self.exps[i].max(other.exps[i]);
        }
        Monomial::with_weights(exps, weights)
    }

    pub fn with_weights(exps: [u16; NVARS], weights: &[u32; NVARS]) -> Monomial {
        let deg = exps.iter().zip(weights.iter()).map(|(&e, &w)| e as u32 * w).sum();
        Monomial { deg, exps }
    }

    /// Bitmask of the variables occurring in the monomial.
    pub fn support(&self) -> u8 {
        let mut s = 0u8;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                s |= 1 << i;
            }
        }
        s
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for i in (0..NVARS).rev() {
                match other.exps[i].cmp(&self.exps[i]) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The term order used everywhere: weighted graded reverse lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonomialOrder {
    pub weights: [u32; NVARS],
}

impl MonomialOrder {
    pub fn grevlex(weights: [u32; NVARS]) -> Self {
        MonomialOrder { weights }
    }
}

/// A polynomial in canonical form: terms strictly descending, coefficients
/// nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, FieldElement)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, FieldElement)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Monomial, FieldElement)> {
        self.terms.first()
    }

    /// Nonzero constant?
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn constant_value(&self) -> Option<FieldElement> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.is_one() => Some(*c),
            _ => None,
        }
    }

    /// Build from an already sorted and combined term list.
    pub(crate) fn from_sorted_terms(terms: Vec<(Monomial, FieldElement)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|t| t.1 != 0));
        Polynomial { terms }
    }

    /// Common weighted degree, if homogeneous and nonzero.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let d = self.terms.first()?.0.degree();
        self.terms.iter().all(|(m, _)| m.degree() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Lowest unweighted total degree of a term; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).min()
    }
}

/// Result of [`PolyRing::weighted_degree`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedDegree {
    Homogeneous(u32),
    Mixed,
}

/// The ambient ring `F_p[x1..x4]` with a positive grading.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyRing {
    field: PrimeField,
    vars: [String; NVARS],
    order: MonomialOrder,
}

impl PolyRing {
    pub fn new(field: PrimeField, vars: [String; NVARS], weights: [u32; NVARS]) -> Result<Self> {
        if weights.contains(&0) {
            return Err(Error::InvalidRing("weights must be positive".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(Error::InvalidRing(format!("bad variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidRing(format!("variable `{v}` declared twice")));
            }
        }
        Ok(PolyRing {
            field,
            vars,
            order: MonomialOrder::grevlex(weights),
        })
    }

    /// `F_p[x,y,z,w]`, standard grading.
    pub fn standard(p: u64) -> Result<Self> {
        let vars = ["x", "y", "z", "w"].map(String::from);
        PolyRing::new(PrimeField::new(p)?, vars, [1; NVARS])
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn variables(&self) -> &[String; NVARS] {
        &self.vars
    }

    pub fn weights(&self) -> &[u32; NVARS] {
        &self.order.weights
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn monomial(&self, exps: [u16; NVARS]) -> Monomial {
        Monomial::with_weights(exps, &self.order.weights)
    }

    pub fn var_monomial(&self, i: usize) -> Monomial {
        let mut e = [0; NVARS];
        e[i] = 1;
        self.monomial(e)
    }

    pub fn one(&self) -> Polynomial {
        self.constant(1)
    }

    pub fn constant(&self, c: FieldElement) -> Polynomial {
        let c = c % self.field.characteristic();
        if c == 0 {
            Polynomial::zero()
        } else {
            Polynomial::from_sorted_terms(vec![(Monomial::ONE, c)])
        }
    }

    pub fn var(&self, i: usize) -> Polynomial {
        Polynomial::from_sorted_terms(vec![(self.var_monomial(i), 1)])
    }

    pub fn term(&self, m: Monomial, c: FieldElement) -> Polynomial {
        if c == 0 {
            Polynomial::zero()
        } else {
            Polynomial::from_sorted_terms(vec![(m, c)])
        }
    }

    /// Canonicalize an arbitrary term list.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, FieldElement)>) -> Polynomial {
        terms.sort_unstable_by_key(|t| std::cmp::Reverse(t.0));
        let mut out: Vec<(Monomial, FieldElement)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(last.1, c),
                _ => out.push((m, c)),
            }
            if out.last().is_some_and(|t| t.1 == 0) {
                out.pop();
            }
        }
        Polynomial::from_sorted_terms(out)
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.add_scaled(a, 1, b)
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.add_scaled(a, self.field.neg(1), b)
    }

    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        self.scale(a, self.field.neg(1))
    }

    pub fn scale(&self, a: &Polynomial, c: FieldElement) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial::from_sorted_terms(a.terms.iter().map(|&(m, x)| (m, self.field.mul(x, c))).collect())
    }

    /// `a + c*b` by a linear merge.
    pub fn add_scaled(&self, a: &Polynomial, c: FieldElement, b: &Polynomial) -> Polynomial {
        if c == 0 || b.is_zero() {
            return a.clone();
        }
        let k = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() && j < b.terms.len() {
            let (ma, ca) = a.terms[i];
            let (mb, cb) = b.terms[j];
            match ma.cmp(&mb) {
                Ordering::Greater => {
                    out.push((ma, ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, k.mul(c, cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = k.add(ca, k.mul(c, cb));
                    if s != 0 {
                        out.push((ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a.terms[i..]);
        out.extend(b.terms[j..].iter().map(|&(m, x)| (m, k.mul(c, x))));
        Polynomial::from_sorted_terms(out)
    }

    pub fn mul_term(&self, a: &Polynomial, m: &Monomial, c: FieldElement) -> Polynomial {
        if c == 0 {
            return Polynomial::zero();
        }
        Polynomial::from_sorted_terms(
            a.terms
                .iter()
                .map(|(am, ac)| (am.mul(m), self.field.mul(*ac, c)))
                .collect(),
        )
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        if a.terms.len() == 1 {
            return self.mul_term(b, &a.terms[0].0, a.terms[0].1);
        }
        if b.terms.len() == 1 {
            return self.mul_term(a, &b.terms[0].0, b.terms[0].1);
        }
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.field.mul(*ca, *cb)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, a: &Polynomial, e: u32) -> Polynomial {
        let mut r = self.one();
        for _ in 0..e {
            r = self.mul(&r, a);
        }
        r
    }

    /// Product with a check that both operands were built in this ring.
    pub fn poly_product(&self, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(self.mul(a, b))
    }

    /// Verify that cached monomial degrees and coefficients are consistent
    /// with this ring's weights and characteristic.
    pub fn check_member(&self, a: &Polynomial) -> Result<()> {
        let p = self.field.characteristic();
        for (m, c) in &a.terms {
            if *c >= p || Monomial::with_weights(m.exps, &self.order.weights).deg != m.deg {
                return Err(Error::RingMismatch("polynomial was built over a different ring".into()));
            }
        }
        Ok(())
    }

    pub fn weighted_degree(&self, a: &Polynomial) -> Result<WeightedDegree> {
        if a.is_zero() {
            return Err(Error::InvalidArgument(
                "weighted degree of the zero polynomial is undefined".into(),
            ));
        }
        Ok(match a.homogeneous_degree() {
            Some(d) => WeightedDegree::Homogeneous(d),
            None => WeightedDegree::Mixed,
        })
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, a: &Polynomial, i: usize) -> Polynomial {
        let terms = a
            .terms
            .iter()
            .filter(|(m, _)| m.exps[i] > 0)
            .map(|(m, c)| {
                let mut e = m.exps;
                let k = e[i];
                e[i] -= 1;
                (self.monomial(e), self.field.mul(*c, self.field.from_u64(k as u64)))
            })
            .filter(|t| t.1 != 0)
            .collect();
        // differentiation preserves the order among surviving terms
        Polynomial::from_sorted_terms(terms)
    }

    /// Exact quotient `a / b`; `None` when `b` does not divide `a`.
    pub fn div_exact(&self, a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
        let (lb, cb) = *b.lead()?;
        let inv = self.field.inv(cb);
        let mut rem = a.clone();
        let mut quot = Vec::new();
        while let Some(&(lm, lc)) = rem.lead() {
            if !lb.divides(&lm) {
                return None;
            }
            let q = lb.quotient_of(&lm);
            let qc = self.field.mul(lc, inv);
            quot.push((q, qc));
            rem = self.add_scaled(&rem, self.field.neg(qc), &self.mul_term(b, &q, 1));
        }
        Some(Polynomial::from_sorted_terms(quot))
    }

    /// Rename-and-permute: the variable `i` of `a` becomes variable `perm[i]`
    /// of `target`.
    pub fn permute_into(&self, a: &Polynomial, perm: &[usize; NVARS], target: &PolyRing) -> Polynomial {
        let terms = a
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = [0u16; NVARS];
                for i in 0..NVARS {
                    e[perm[i]] = m.exps[i];
                }
                (target.monomial(e), *c)
            })
            .collect();
        target.from_terms(terms)
    }

    /// Canonical text form: descending terms, explicit `*` and `^`,
    /// coefficients as least non-negative residues.
    pub fn format(&self, a: &Polynomial) -> String {
        if a.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in a.terms.iter().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let mut factors = Vec::new();
            if *c != 1 || m.is_one() {
                factors.push(c.to_string());
            }
            for (i, &e) in m.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars[i].clone()),
                    _ => factors.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }

    pub fn display<'a>(&'a self, a: &'a Polynomial) -> PolyDisplay<'a> {
        PolyDisplay { ring: self, poly: a }
    }

    /// Parse a polynomial. Grammar: sums and differences of products of
    /// factors; a factor is an integer, a variable or a parenthesized
    /// expression, optionally raised to a non-negative integer power.
    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        let mut p = Parser {
            ring: self,
            src: text.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(v)
    }
}

pub struct PolyDisplay<'a> {
    ring: &'a PolyRing,
    poly: &'a Polynomial,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(self.poly))
    }
}

/// Free function form of [`PolyRing::parse`].
pub fn parse_polynomial(text: &str, ring: &PolyRing) -> Result<Polynomial> {
    ring.parse(text)
}

/// Free function form of [`PolyRing::poly_product`].
pub fn poly_product(ring: &PolyRing, a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    ring.poly_product(a, b)
}

struct Parser<'a> {
    ring: &'a PolyRing,
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            line: 1,
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let ring = self.ring;
        let k = ring.field();
        let mut acc = Polynomial::zero();
        let mut sign = 1;
        match self.peek() {
            Some(b'-') => {
                sign = k.neg(1);
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.product()?;
            acc = ring.add_scaled(&acc, sign, &t);
            match self.peek() {
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = k.neg(1);
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.power()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let mut e: u32 = 0;
            while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
                e = e
                    .checked_mul(10)
                    .and_then(|e| e.checked_add((d - b'0') as u32))
                    .filter(|&e| e <= u16::MAX as u32)
                    .ok_or_else(|| self.error("exponent too large"))?;
                self.pos += 1;
            }
            if self.pos == start {
                return Err(self.error("expected exponent after `^`"));
            }
            return Ok(self.ring.pow(&base, e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let ring = self.ring;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'-') => {
                self.pos += 1;
                let v = self.power()?;
                Ok(ring.neg(&v))
            }
            Some(c) if c.is_ascii_digit() => {
                let p = ring.field().characteristic() as u64;
                let mut v: u64 = 0;
                while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
                    v = (v * 10 + (d - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(ring.constant(v as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .src
                    .get(self.pos)
                    .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match ring.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(ring.var(i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qc() -> PolyRing {
        PolyRing::standard(101).unwrap()
    }

    #[test]
    fn parse_examples() {
        let r = qc();
        let f = r.parse("x*y - z*w").unwrap();
        assert_eq!(f.len(), 2);
        assert_eq!(r.weighted_degree(&f).unwrap(), WeightedDegree::Homogeneous(2));
        assert!(r.parse("x - x").unwrap().is_zero());
        assert_eq!(r.parse("102*x").unwrap(), r.parse("x").unwrap());
        assert_eq!(r.format(&f), "x*y + 100*z*w");
    }

    #[test]
    fn parse_errors() {
        let r = qc();
        assert!(matches!(r.parse("x + q"), Err(Error::UnknownVariable(v)) if v == "q"));
        match r.parse("x + * y") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        assert!(r.parse("x^").is_err());
        assert!(r.parse("(x").is_err());
    }

    #[test]
    fn products() {
        let r = qc();
        let a = r.parse("x+y").unwrap();
        let b = r.parse("x-y").unwrap();
        assert_eq!(r.mul(&a, &b), r.parse("x^2 - y^2").unwrap());
        let f = r.parse("x*y - z*w").unwrap();
        assert_eq!(r.mul(&f, &r.one()), f);
        assert_eq!(r.pow(&a, 2), r.parse("x^2 + 2*x*y + y^2").unwrap());
    }

    #[test]
    fn weighted_degrees() {
        let r = PolyRing::new(
            PrimeField::new(101).unwrap(),
            ["x", "y", "z", "w"].map(String::from),
            [3, 2, 1, 1],
        )
        .unwrap();
        let g = r.parse("x^2 + y^3").unwrap();
        assert_eq!(r.weighted_degree(&g).unwrap(), WeightedDegree::Homogeneous(6));
        let q = qc();
        assert_eq!(
            q.weighted_degree(&q.parse("x + y^2").unwrap()).unwrap(),
            WeightedDegree::Mixed
        );
        assert!(q.weighted_degree(&Polynomial::zero()).is_err());
    }

    #[test]
    fn grevlex_order() {
        let r = qc();
        let x = r.var_monomial(0);
        let y = r.var_monomial(1);
        let w = r.var_monomial(3);
        assert!(x > y && y > w);
        // x*w < y^2 in grevlex
        assert!(x.mul(&w) < y.mul(&y));
        assert!(Monomial::ONE < w);
    }

    #[test]
    fn exact_division() {
        let r = qc();
        let a = r.parse("x^2 - y^2").unwrap();
        let b = r.parse("x - y").unwrap();
        assert_eq!(r.div_exact(&a, &b).unwrap(), r.parse("x+y").unwrap());
        assert!(r.div_exact(&r.parse("x^2 + y").unwrap(), &b).is_none());
    }

    #[test]
    fn ring_mismatch_detected() {
        let r = qc();
        let other = PolyRing::new(
            PrimeField::new(101).unwrap(),
            ["x", "y", "z", "w"].map(String::from),
            [2, 1, 1, 1],
        )
        .unwrap();
        let a = other.parse("x").unwrap();
        assert!(matches!(r.poly_product(&a, &r.one()), Err(Error::RingMismatch(_))));
    }

    fn arb_exponents(d: u32) -> impl Strategy<Value = [u16; 4]> {
        (0..=d)
            .prop_flat_map(move |a| (Just(a), 0..=d - a))
            .prop_flat_map(move |(a, b)| (Just(a), Just(b), 0..=d - a - b))
            .prop_map(move |(a, b, c)| [a as u16, b as u16, c as u16, (d - a - b - c) as u16])
    }

    fn arb_homogeneous(d: u32) -> impl Strategy<Value = Vec<([u16; 4], u32)>> {
        prop::collection::vec((arb_exponents(d), 0u32..101), 0..6)
    }

    fn build(r: &PolyRing, t: Vec<([u16; 4], u32)>) -> Polynomial {
        r.from_terms(t.into_iter().map(|(e, c)| (r.monomial(e), c)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn ring_axioms(a in arb_homogeneous(2), b in arb_homogeneous(2), c in arb_homogeneous(2)) {
            let r = qc();
            let (a, b, c) = (build(&r, a), build(&r, b), build(&r, c));
            prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
            prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
            prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
            let ab = r.mul(&a, &b);
            prop_assert!(ab.is_homogeneous());
            if !ab.is_zero() {
                prop_assert_eq!(ab.homogeneous_degree(), Some(4));
            }
        }

        #[test]
        fn print_parse_roundtrip(a in arb_homogeneous(3)) {
            let r = qc();
            let a = build(&r, a);
            prop_assert_eq!(r.parse(&r.format(&a)).unwrap(), a);
        }
    }
}
