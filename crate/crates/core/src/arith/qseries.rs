//! Sparse Laurent series in `q` with fractional exponents and an explicit
//! truncation order.
//!
//! Exponents live in `(1/N)Z`; a term `q^{n/N}` is keyed by the integer `n`.
//! `trunc == None` marks an exact (finite) series, otherwise coefficients are
//! only meaningful for exponents strictly below `trunc`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::cyc8::Cyc8;
use super::mp::{bigint_to_bf, to_f64, Mp, MpC};
use crate::error::{Error, Result};

/// Small exact rationals used for exponents and discriminant values.
pub type Q = Ratio<i64>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    denom: i64,
    terms: BTreeMap<i64, Cyc8>,
    trunc: Option<Q>,
}

fn min_trunc(a: Option<Q>, b: Option<Q>) -> Option<Q> {
    match (a, b) {
        (None, t) | (t, None) => t,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl QSeries {
    /// The zero series valid below `trunc`.
    pub fn zero(trunc: Option<Q>) -> Self {
        QSeries { denom: 1, terms: BTreeMap::new(), trunc }
    }

    pub fn one() -> Self {
        Self::constant(Cyc8::one())
    }

    pub fn constant(c: Cyc8) -> Self {
        Self::monomial(c, Q::zero())
    }

    /// `c·q^e`, exact.
    pub fn monomial(c: Cyc8, e: Q) -> Self {
        let mut s = QSeries { denom: *e.denom(), terms: BTreeMap::new(), trunc: None };
        if !c.is_zero() {
            s.terms.insert(*e.numer(), c);
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs; zero coefficients
    /// and exponents at or above `trunc` are dropped.
    pub fn from_terms<I: IntoIterator<Item = (Q, Cyc8)>>(it: I, trunc: Option<Q>) -> Self {
        let pairs: Vec<(Q, Cyc8)> = it.into_iter().collect();
        let mut denom = 1i64;
        for (e, _) in &pairs {
            denom = denom.lcm(e.denom());
        }
        if let Some(t) = trunc {
            denom = denom.lcm(t.denom());
        }
        let mut terms: BTreeMap<i64, Cyc8> = BTreeMap::new();
        for (e, c) in pairs {
            if trunc.is_some_and(|t| e >= t) {
                continue;
            }
            let key = e.numer() * (denom / e.denom());
            let entry = terms.entry(key).or_default();
            *entry += &c;
        }
        terms.retain(|_, c| !c.is_zero());
        QSeries { denom, terms, trunc }.normalized()
    }

    /// Dense integer coefficients: `coeffs[j]` sits at exponent `offset + j·stride`.
    pub fn from_dense(offset: Q, stride: Q, coeffs: &[BigInt], trunc: Option<Q>) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (offset + stride * Q::from(j as i64), Cyc8::from_bigint(c.clone()))),
            trunc,
        )
    }

    pub fn trunc(&self) -> Option<Q> {
        self.trunc
    }

    pub fn denom(&self) -> i64 {
        self.denom
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (Q, &Cyc8)> + '_ {
        let d = self.denom;
        self.terms.iter().map(move |(n, c)| (Q::new(*n, d), c))
    }

    /// Coefficient at exponent `e` (zero if absent). Asking at or beyond the
    /// truncation order is a logic error.
    pub fn coeff(&self, e: Q) -> Cyc8 {
        debug_assert!(self.trunc.is_none_or(|t| e < t), "coefficient requested beyond trunc");
        let scaled = e * Q::from(self.denom);
        if !scaled.is_integer() {
            return Cyc8::zero();
        }
        self.terms.get(&scaled.to_integer()).cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Q> {
        self.terms.keys().next().map(|n| Q::new(*n, self.denom))
    }

    /// Valuation, or the truncation order for a zero series.
    fn effective_valuation(&self) -> Option<Q> {
        self.valuation().or(self.trunc)
    }

    pub fn leading(&self) -> Option<(Q, &Cyc8)> {
        self.iter().next()
    }

    fn normalized(mut self) -> Self {
        // Reduce the denominator to the smallest one that still expresses all
        // exponents and the truncation order.
        let mut g = self.denom;
        for n in self.terms.keys() {
            g = g.gcd(n);
            if g == 1 {
                break;
            }
        }
        if let Some(t) = self.trunc {
            g = g.gcd(&(self.denom / t.denom()));
        }
        if g > 1 {
            self.terms = core::mem::take(&mut self.terms).into_iter().map(|(n, c)| (n / g, c)).collect();
            self.denom /= g;
        }
        self
    }

    fn regrid(&self, denom: i64) -> BTreeMap<i64, Cyc8> {
        let f = denom / self.denom;
        debug_assert_eq!(denom % self.denom, 0);
        self.terms.iter().map(|(n, c)| (n * f, c.clone())).collect()
    }

    /// Drops terms at or above `t` and lowers the truncation order.
    pub fn truncate(&self, t: Q) -> Self {
        let trunc = min_trunc(self.trunc, Some(t));
        let tt = trunc.unwrap();
        let terms = self.iter().filter(|(e, _)| *e < tt).map(|(e, c)| (e, c.clone()));
        Self::from_terms(terms, trunc)
    }

    pub fn add(&self, o: &QSeries) -> QSeries {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &QSeries) -> QSeries {
        self.combine(o, true)
    }

    fn combine(&self, o: &QSeries, negate: bool) -> QSeries {
        let trunc = min_trunc(self.trunc, o.trunc);
        let denom = self.denom.lcm(&o.denom);
        let mut terms = self.regrid(denom);
        for (n, c) in o.regrid(denom) {
            let e = terms.entry(n).or_default();
            if negate {
                *e -= &c;
            } else {
                *e += &c;
            }
        }
        let s = QSeries { denom, terms, trunc };
        s.clip()
    }

    /// Removes zeros and terms at or beyond the truncation order.
    fn clip(mut self) -> Self {
        if let Some(t) = self.trunc {
            let limit = t * Q::from(self.denom);
            self.terms.retain(|n, c| !c.is_zero() && Q::from(*n) < limit);
            let tden = *t.denom();
            if self.denom % tden != 0 {
                let d = self.denom.lcm(&tden);
                self.terms = self.regrid(d);
                self.denom = d;
            }
        } else {
            self.terms.retain(|_, c| !c.is_zero());
        }
        self.normalized()
    }

    pub fn neg(&self) -> QSeries {
        QSeries { denom: self.denom, terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(), trunc: self.trunc }
    }

    pub fn scale(&self, s: &Cyc8) -> QSeries {
        if s.is_zero() {
            return QSeries::zero(self.trunc);
        }
        QSeries { denom: self.denom, terms: self.terms.iter().map(|(n, c)| (*n, c * s)).collect(), trunc: self.trunc }
    }

    /// Multiplies by `q^e`, shifting the truncation order as well.
    pub fn shift(&self, e: Q) -> QSeries {
        let terms = self.iter().map(|(x, c)| (x + e, c.clone()));
        Self::from_terms(terms, self.trunc.map(|t| t + e))
    }

    /// Cauchy product. Validity: `min(ta + vb, tb + va)`.
    pub fn mul(&self, o: &QSeries) -> QSeries {
        let trunc = match (self.trunc, o.trunc) {
            (None, None) => None,
            (Some(ta), None) => o.effective_valuation().map(|vb| ta + vb).or(Some(ta)),
            (None, Some(tb)) => self.effective_valuation().map(|va| tb + va).or(Some(tb)),
            (Some(ta), Some(tb)) => {
                let va = self.effective_valuation().unwrap();
                let vb = o.effective_valuation().unwrap();
                Some((ta + vb).min(tb + va))
            }
        };
        let denom = self.denom.lcm(&o.denom);
        let a = self.regrid(denom);
        let b = o.regrid(denom);
        let limit = trunc.map(|t| t * Q::from(denom));
        let mut terms: BTreeMap<i64, Cyc8> = BTreeMap::new();
        for (na, ca) in &a {
            for (nb, cb) in &b {
                let n = na + nb;
                if limit.is_some_and(|l| Q::from(n) >= l) {
                    break;
                }
                let e = terms.entry(n).or_default();
                *e += &(ca * cb);
            }
        }
        QSeries { denom, terms, trunc }.clip()
    }

    /// Multiplicative inverse of a series with an invertible leading term.
    /// Validity: `t − 2v` where `v` is the valuation.
    pub fn inverse(&self) -> Result<QSeries> {
        let (v, lead) = self.leading().ok_or_else(|| Error::OutOfRange("inverse of zero series".into()))?;
        let lead_inv = lead.inv();
        // Work with u = q^{-v}·self/lead = 1 + h.
        let u = self.shift(-v).scale(&lead_inv);
        let t_u = u.trunc;
        if t_u.is_none() && u.len() == 1 {
            return Ok(QSeries::monomial(lead_inv, -v));
        }
        let t_u = t_u.ok_or_else(|| {
            Error::OutOfRange("inverse of an exact non-monomial series needs a truncation order".into())
        })?;
        let denom = u.denom;
        let limit = (t_u * Q::from(denom)).ceil().to_integer();
        let h: Vec<(i64, &Cyc8)> = u.terms.iter().filter(|(n, _)| **n > 0).map(|(n, c)| (*n, c)).collect();
        let mut inv: BTreeMap<i64, Cyc8> = BTreeMap::new();
        inv.insert(0, Cyc8::one());
        // b_m = −Σ_{k>0} h_k b_{m−k}
        for m in 1..limit.max(1) {
            let mut acc = Cyc8::zero();
            for (k, hk) in &h {
                if *k > m {
                    break;
                }
                if let Some(b) = inv.get(&(m - k)) {
                    acc += &(*hk * b);
                }
            }
            if !acc.is_zero() {
                inv.insert(m, -acc);
            }
        }
        let base = QSeries { denom, terms: inv, trunc: Some(t_u) }.clip();
        Ok(base.scale(&lead_inv).shift(-v))
    }

    /// Integer power; negative powers go through [`QSeries::inverse`].
    pub fn pow(&self, e: i64) -> Result<QSeries> {
        if e < 0 {
            return self.inverse()?.pow(-e);
        }
        let mut acc = QSeries::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// Substitutes `q ↦ q^s` (so `f(τ) ↦ f(sτ)`), scaling exponents and trunc.
    pub fn scale_exponents(&self, s: Q) -> QSeries {
        assert!(s > Q::zero());
        let terms = self.iter().map(|(e, c)| (e * s, c.clone()));
        Self::from_terms(terms, self.trunc.map(|t| t * s))
    }

    /// Keeps only terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(Q) -> bool) -> QSeries {
        let terms = self.iter().filter(|(e, _)| keep(*e)).map(|(e, c)| (e, c.clone()));
        Self::from_terms(terms, self.trunc)
    }

    /// Exact equality for all exponents below `t` (and below both truncations).
    pub fn eq_below(&self, o: &QSeries, t: Q) -> bool {
        let lim = min_trunc(min_trunc(self.trunc, o.trunc), Some(t)).unwrap();
        let a = self.filter(|e| e < lim);
        let b = o.filter(|e| e < lim);
        a.terms_eq(&b)
    }

    /// Equality of all common known coefficients.
    pub fn eq_common(&self, o: &QSeries) -> bool {
        match min_trunc(self.trunc, o.trunc) {
            Some(t) => self.eq_below(o, t),
            None => self.terms_eq(o),
        }
    }

    fn terms_eq(&self, o: &QSeries) -> bool {
        let d = self.denom.lcm(&o.denom);
        self.regrid(d) == o.regrid(d)
    }

    /// True when every coefficient is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(Cyc8::is_integer)
    }

    /// Rational coefficient at `e`, panicking if it is not rational.
    pub fn rational_coeff(&self, e: Q) -> BigRational {
        self.coeff(e).to_rational().expect("coefficient is not rational")
    }

    /// Evaluates at `τ` (Im τ > 0). Returns the value and a heuristic tail
    /// estimate `|q|^{trunc}/(1−|q|)·max|c|` over the top unit of exponents.
    pub fn eval(&self, tau: &MpC, mp: &mut Mp) -> Result<(MpC, f64)> {
        if !tau.im.is_positive() {
            return Err(Error::Domain("evaluation needs Im τ > 0".into()));
        }
        let p = mp.prec();
        // x = e^{2πiτ/N}
        let base = mp.e2pii(&MpC::new(
            tau.re.div(&mp.int(self.denom), p, super::mp::RM),
            tau.im.div(&mp.int(self.denom), p, super::mp::RM),
            p,
        ));
        let mut acc = mp.czero();
        let mut cur: Option<(i64, MpC)> = None;
        for (k, c) in &self.terms {
            let xk = match &cur {
                None => base.powi(*k),
                Some((k0, x0)) => x0 * &base.powi(k - k0),
            };
            let term = &c.embed(mp) * &xk;
            acc = &acc + &term;
            cur = Some((*k, xk));
        }
        let tail = match self.trunc {
            None => 0.0,
            Some(t) => {
                let absq = libm::exp(-2.0 * core::f64::consts::PI * to_f64(&tau.im));
                let top = self
                    .iter()
                    .filter(|(e, _)| *e >= t - Q::one())
                    .map(|(_, c)| c.l1())
                    .fold(0.0f64, f64::max)
                    .max(1.0);
                let tf = t.to_f64().unwrap();
                libm::pow(absq, tf) / (1.0 - absq) * top
            }
        };
        Ok((acc, tail))
    }

    /// Text serialization: header `N=<denom> trunc=<rational|inf>` then one
    /// line per term, `num/den c0 c1 c2 c3`, in increasing exponent order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let t = match self.trunc {
            Some(t) => alloc::format!("{}/{}", t.numer(), t.denom()),
            None => "inf".into(),
        };
        let _ = writeln!(s, "N={} trunc={}", self.denom, t);
        for (e, c) in self.iter() {
            let _ = writeln!(s, "{}/{} {}", e.numer(), e.denom(), c.to_coeff_string());
        }
        s
    }

    pub fn from_text(text: &str) -> Result<QSeries> {
        let perr = |msg: &str| Error::Parse { pos: 0, msg: msg.into() };
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| perr("empty input"))?;
        let mut denom = None;
        let mut trunc = None;
        for part in header.split_whitespace() {
            if let Some(v) = part.strip_prefix("N=") {
                denom = Some(v.parse::<i64>().map_err(|_| perr("bad N"))?);
            } else if let Some(v) = part.strip_prefix("trunc=") {
                trunc = if v == "inf" { None } else { Some(parse_q(v).ok_or_else(|| perr("bad trunc"))?) };
            }
        }
        let denom = denom.ok_or_else(|| perr("missing N"))?;
        let mut terms = Vec::new();
        for line in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(perr("expected exponent and four coefficients"));
            }
            let e = parse_q(f[0]).ok_or_else(|| perr("bad exponent"))?;
            let mut cs: [BigRational; 4] = Default::default();
            for i in 0..4 {
                cs[i] = parse_big_q(f[i + 1]).ok_or_else(|| perr("bad coefficient"))?;
            }
            terms.push((e, Cyc8::from_coeffs(cs)));
        }
        let mut s = Self::from_terms(terms, trunc);
        if denom % s.denom == 0 && denom != s.denom {
            s.terms = s.regrid(denom);
            s.denom = denom;
        }
        Ok(s)
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d: i64 = b.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Q::new(a.trim().parse().ok()?, d))
        }
        None => Some(Q::from(s.trim().parse::<i64>().ok()?)),
    }
}

fn parse_big_q(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d: BigInt = b.parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(a.parse().ok()?, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Convenience: integer coefficients of an integral rational series at the
/// listed exponents.
pub fn int_coeff(s: &QSeries, e: Q) -> i64 {
    let c = s.rational_coeff(e);
    assert!(c.is_integer(), "coefficient {c} at {e} is not integral");
    c.to_integer().to_i64().expect("coefficient fits i64")
}

/// Magnitude of a big rational as f64.
pub fn big_q_to_f64(x: &BigRational) -> f64 {
    let p = 128;
    let n = bigint_to_bf(x.numer(), p);
    let d = bigint_to_bf(x.denom(), p);
    to_f64(&n.div(&d, p, super::mp::RM))
}

/// Absolute value helper shared with tests.
pub fn abs_q(x: Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(pairs: &[(i64, i64, i64)], trunc: Option<Q>) -> QSeries {
        QSeries::from_terms(pairs.iter().map(|(n, d, c)| (q(*n, *d), Cyc8::from_int(*c))), trunc)
    }

    #[test]
    fn unit_product() {
        let a = qs(&[(-1, 1, 1), (0, 1, 8)], None);
        assert_eq!(a.mul(&QSeries::one()), a);
    }

    #[test]
    fn geometric_inverse() {
        let one_minus_q = qs(&[(0, 1, 1), (1, 1, -1)], Some(q(20, 1)));
        let g = one_minus_q.inverse().unwrap();
        for n in 0..20 {
            assert_eq!(g.coeff(q(n, 1)), Cyc8::one());
        }
        let prod = one_minus_q.mul(&g);
        assert!(prod.eq_common(&QSeries::one()));
    }

    #[test]
    fn trunc_rules() {
        let a = qs(&[(-1, 1, 1), (0, 1, 3)], Some(q(5, 1)));
        let b = qs(&[(1, 4, 2)], Some(q(3, 1)));
        let p = a.mul(&b);
        assert_eq!(p.trunc(), Some(q(2, 1).min(q(5, 1) + q(1, 4))));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.trunc(), Some(q(7, 1)));
    }

    #[test]
    fn quarter_exponents_and_text_roundtrip() {
        let a = qs(&[(1, 4, 2), (9, 4, 2), (25, 4, 2)], Some(q(8, 1)));
        assert_eq!(a.denom(), 4);
        let t = a.to_text();
        assert!(t.starts_with("N=4 trunc=8/1"));
        let b = QSeries::from_text(&t).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn scale_exponents_divides() {
        let a = qs(&[(-1, 1, 1), (0, 1, 8), (3, 1, 5)], Some(q(4, 1)));
        let b = a.scale_exponents(q(1, 4));
        assert_eq!(b.coeff(q(-1, 4)), Cyc8::one());
        assert_eq!(b.coeff(q(3, 4)), Cyc8::from_int(5));
        assert_eq!(b.trunc(), Some(q(1, 1)));
    }

    #[test]
    fn eval_constant() {
        let mut mp = Mp::new(96);
        let (v, tail) = QSeries::one().eval(&mp.c(0.2, 0.7), &mut mp).unwrap();
        assert!(v.dist(&mp.cone()) < 1e-25 && tail == 0.0, "{:?} {tail}", v.to_c64());
        assert!(QSeries::one().eval(&mp.c(0.2, -0.1), &mut mp).is_err());
    }
}
