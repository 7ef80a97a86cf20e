//! Exact Laurent series arithmetic over F_p, i.e. elements of K0 = F_p((t)).
//!
//! A series is a sparse map from integer exponents to nonzero coefficients,
//! together with a cutoff: coefficients at exponents below the cutoff are
//! exact, coefficients at or above it are unknown. Finite input data (Laurent
//! polynomials) carry an unbounded cutoff and stay exact through ring
//! operations; a finite cutoff enters only through the wp-preimage of a
//! positive-valuation tail, which is a genuinely infinite series.
//!
//! Every operation computes the tightest provable cutoff for its result, and
//! any query that cannot be answered inside the window fails with
//! `PrecisionExhausted` instead of guessing.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fp::Prime;

/// Absolute exponent cutoff of a series: all exponents `< At(n)` are exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cutoff {
    At(i64),
    Unbounded,
}

impl Cutoff {
    pub fn min(self, other: Cutoff) -> Cutoff {
        std::cmp::min(self, other)
    }

    pub fn shift(self, d: i64) -> Cutoff {
        match self {
            Cutoff::At(n) => Cutoff::At(n + d),
            Cutoff::Unbounded => Cutoff::Unbounded,
        }
    }

    pub fn scale(self, k: i64) -> Cutoff {
        match self {
            Cutoff::At(n) => Cutoff::At(n * k),
            Cutoff::Unbounded => Cutoff::Unbounded,
        }
    }

    pub fn admits(self, exponent: i64) -> bool {
        match self {
            Cutoff::At(n) => exponent < n,
            Cutoff::Unbounded => true,
        }
    }
}

/// Valuation of a series; `Infinite` marks a certified zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "+inf"),
        }
    }
}

/// An element of F_p((t)) with an explicit precision window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    p: Prime,
    terms: BTreeMap<i64, u32>,
    cutoff: Cutoff,
}

impl LaurentSeries {
    pub fn zero(p: Prime) -> Self {
        LaurentSeries {
            p,
            terms: BTreeMap::new(),
            cutoff: Cutoff::Unbounded,
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::monomial(p, 0, 1)
    }

    pub fn constant(p: Prime, c: i64) -> Self {
        Self::monomial(p, 0, c)
    }

    pub fn monomial(p: Prime, exponent: i64, coeff: i64) -> Self {
        let mut terms = BTreeMap::new();
        let c = p.reduce(coeff);
        if c != 0 {
            terms.insert(exponent, c);
        }
        LaurentSeries {
            p,
            terms,
            cutoff: Cutoff::Unbounded,
        }
    }

    /// Build an exact series from `[exponent, coefficient]` pairs; repeated
    /// exponents accumulate and coefficients are reduced mod p.
    ///
    /// ```
    /// use pscaffold::{LaurentSeries, Prime, Valuation};
    /// let p = Prime::new(3).unwrap();
    /// let s = LaurentSeries::from_pairs(p, &[(-7, 1), (2, 4)]);
    /// assert_eq!(s.valuation().unwrap(), Valuation::Finite(-7));
    /// assert_eq!(s.to_string(), "t^-7 + t^2");
    /// ```
    pub fn from_pairs(p: Prime, pairs: &[(i64, i64)]) -> Self {
        let mut s = Self::zero(p);
        for &(e, c) in pairs {
            s = s.add(&Self::monomial(p, e, c));
        }
        s
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn cutoff(&self) -> Cutoff {
        self.cutoff
    }

    /// Exponent/coefficient pairs in increasing exponent order.
    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.terms.iter().map(|(&e, &c)| (e, c as i64)).collect()
    }

    pub fn coefficient(&self, exponent: i64) -> u32 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    /// No terms are stored; the series is zero at least up to its cutoff.
    pub fn is_zero_within_window(&self) -> bool {
        self.terms.is_empty()
    }

    /// Certified equal to zero: no terms and an unbounded window.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.cutoff == Cutoff::Unbounded
    }

    /// Restrict the window, dropping any terms it no longer covers.
    pub fn truncated(&self, cutoff: Cutoff) -> Self {
        let cutoff = self.cutoff.min(cutoff);
        let terms = self
            .terms
            .iter()
            .filter(|(&e, _)| cutoff.admits(e))
            .map(|(&e, &c)| (e, c))
            .collect();
        LaurentSeries {
            p: self.p,
            terms,
            cutoff,
        }
    }

    /// Least exponent carrying a nonzero coefficient. The infinite marker is
    /// returned only for a certified zero; an empty window of finite width
    /// cannot rule out hidden terms and is an error.
    pub fn valuation(&self) -> Result<Valuation> {
        match self.terms.keys().next() {
            Some(&e) => Ok(Valuation::Finite(e)),
            None => match self.cutoff {
                Cutoff::Unbounded => Ok(Valuation::Infinite),
                Cutoff::At(n) => Err(Error::PrecisionExhausted(format!(
                    "series is zero below t^{n} but terms beyond the window could exist"
                ))),
            },
        }
    }

    /// Valuation query with an explicit confidence horizon: an empty series
    /// counts as zero when its window covers every exponent below `horizon`,
    /// and is a precision error only past that point.
    pub fn valuation_up_to(&self, horizon: i64) -> Result<Valuation> {
        match self.terms.keys().next() {
            Some(&e) => Ok(Valuation::Finite(e)),
            None => match self.cutoff {
                Cutoff::Unbounded => Ok(Valuation::Infinite),
                Cutoff::At(n) if n >= horizon => Ok(Valuation::Infinite),
                Cutoff::At(n) => Err(Error::PrecisionExhausted(format!(
                    "zero below t^{n}, but certifying zero up to t^{horizon} needs a wider window"
                ))),
            },
        }
    }

    /// Lower bound for the valuation that is always available: the leading
    /// exponent, or the cutoff itself when no term is stored.
    pub fn valuation_lower_bound(&self) -> Valuation {
        match self.terms.keys().next() {
            Some(&e) => Valuation::Finite(e),
            None => match self.cutoff {
                Cutoff::Unbounded => Valuation::Infinite,
                Cutoff::At(n) => Valuation::Finite(n),
            },
        }
    }

    fn lower_exp_for_cutoff(&self) -> i64 {
        match self.valuation_lower_bound() {
            Valuation::Finite(v) => v,
            Valuation::Infinite => unreachable!("exact zeros are handled by the caller"),
        }
    }

    fn assert_same_prime(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed moduli in series arithmetic");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_prime(other);
        let cutoff = self.cutoff.min(other.cutoff);
        let mut terms = BTreeMap::new();
        for (&e, &c) in self.terms.iter().chain(other.terms.iter()) {
            if !cutoff.admits(e) {
                continue;
            }
            let v = self.p.add(*terms.get(&e).unwrap_or(&0), c);
            if v == 0 {
                terms.remove(&e);
            } else {
                terms.insert(e, v);
            }
        }
        LaurentSeries {
            p: self.p,
            terms,
            cutoff,
        }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&e, &c)| (e, self.p.neg(c)))
            .collect();
        LaurentSeries {
            p: self.p,
            terms,
            cutoff: self.cutoff,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.p.reduce(c);
        if c == 0 {
            // scaling by zero is exact regardless of the window
            return Self::zero(self.p);
        }
        let terms = self
            .terms
            .iter()
            .map(|(&e, &k)| (e, self.p.mul(k, c)))
            .collect();
        LaurentSeries {
            p: self.p,
            terms,
            cutoff: self.cutoff,
        }
    }

    /// Multiply by t^d.
    pub fn shift(&self, d: i64) -> Self {
        let terms = self.terms.iter().map(|(&e, &c)| (e + d, c)).collect();
        LaurentSeries {
            p: self.p,
            terms,
            cutoff: self.cutoff.shift(d),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_prime(other);
        if self.is_exact_zero() || other.is_exact_zero() {
            return Self::zero(self.p);
        }
        // a product coefficient at k is known iff every contribution is,
        // which pins the cutoff at min(N_a + v(b), N_b + v(a))
        let mut cutoff = Cutoff::Unbounded;
        if let Cutoff::At(n) = self.cutoff {
            cutoff = cutoff.min(Cutoff::At(n + other.lower_exp_for_cutoff()));
        }
        if let Cutoff::At(n) = other.cutoff {
            cutoff = cutoff.min(Cutoff::At(n + self.lower_exp_for_cutoff()));
        }
        let mut terms: BTreeMap<i64, u32> = BTreeMap::new();
        for (&ea, &ca) in &self.terms {
            for (&eb, &cb) in &other.terms {
                let e = ea + eb;
                if !cutoff.admits(e) {
                    continue;
                }
                let v = self.p.add(*terms.get(&e).unwrap_or(&0), self.p.mul(ca, cb));
                if v == 0 {
                    terms.remove(&e);
                } else {
                    terms.insert(e, v);
                }
            }
        }
        LaurentSeries {
            p: self.p,
            terms,
            cutoff,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The p-th power. Exact and cheap in characteristic p over F_p: it just
    /// multiplies every exponent by p (c^p = c on scalars).
    pub fn frobenius(&self) -> Self {
        let q = self.p.p() as i64;
        let terms = self.terms.iter().map(|(&e, &c)| (e * q, c)).collect();
        LaurentSeries {
            p: self.p,
            terms,
            cutoff: self.cutoff.scale(q),
        }
    }

    /// wp(s) = s^p - s.
    pub fn wp(&self) -> Self {
        self.frobenius().sub(self)
    }

    /// Falling-factorial binomial binom(s, i) = s(s-1)...(s-i+1)/i! for
    /// 0 <= i <= p-1, so that i! is invertible.
    pub fn binomial(&self, i: u32) -> Result<Self> {
        if i >= self.p.p() {
            return Err(Error::InvalidInput(format!(
                "binom(series, {i}) needs i < p = {}",
                self.p.p()
            )));
        }
        let mut acc = Self::one(self.p);
        let mut fact = 1u64;
        for j in 0..i {
            acc = acc.mul(&self.sub(&Self::constant(self.p, j as i64)));
            fact *= (j + 1) as u64;
        }
        Ok(acc.scale(self.p.inv_int(fact) as i64))
    }

    /// Exact equality of the known parts on the common window.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let cutoff = self.cutoff.min(other.cutoff);
        self.truncated(cutoff).terms == other.truncated(cutoff).terms
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        } else {
            for (i, (&e, &c)) in self.terms.iter().enumerate() {
                if i > 0 {
                    write!(f, " + ")?;
                }
                match (e, c) {
                    (0, c) => write!(f, "{c}")?,
                    (1, 1) => write!(f, "t")?,
                    (1, c) => write!(f, "{c}*t")?,
                    (e, 1) => write!(f, "t^{e}")?,
                    (e, c) => write!(f, "{c}*t^{e}")?,
                }
            }
        }
        if let Cutoff::At(n) = self.cutoff {
            write!(f, " + O(t^{n})")?;
        }
        Ok(())
    }
}

impl Serialize for LaurentSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.pairs().serialize(s)
    }
}

/// Artin-Schreier reduction in K0: returns `(reduced, y)` with
/// `reduced = beta - wp(y)` and `reduced` of maximal valuation in its coset,
/// so exactly one of the following holds: its valuation is negative and prime
/// to p, it is a constant, or it is zero.
///
/// Leading terms c*t^(-pk) with k > 0 are stripped by subtracting
/// wp(c*t^(-k)); the strictly positive tail is absorbed through the
/// wp-preimage on t*F_p[[t]], computed by fixed-point iteration up to
/// `window`. The reduced representative is exact (it is determined by the
/// exponents <= 0, which the window covers whenever it reaches past 0); only
/// the witness y is windowed.
pub fn artin_schreier_reduce(
    beta: &LaurentSeries,
    window: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let p = beta.prime();
    let q = p.p() as i64;
    if !matches!(beta.cutoff(), Cutoff::Unbounded) && !beta.cutoff().admits(0) {
        return Err(Error::PrecisionExhausted(
            "window too narrow to read the principal part".into(),
        ));
    }

    let mut rest = beta.clone();
    let mut witness = LaurentSeries::zero(p);

    // strip leading terms with exponent -pk, k > 0; the p-th root of a
    // scalar is itself
    while let Some(&lead) = rest.terms.keys().next() {
        if lead >= 0 {
            break;
        }
        if lead % q != 0 {
            // leading term already reduced; nothing below it can change
            break;
        }
        let c = rest.coefficient(lead);
        let root = LaurentSeries::monomial(p, lead / q, c as i64);
        rest = rest.sub(&root.wp());
        witness = witness.add(&root);
    }

    // split off the strictly positive tail and absorb it into wp(K0)
    let tail_terms: Vec<(i64, i64)> = rest
        .terms
        .iter()
        .filter(|(&e, _)| e > 0)
        .map(|(&e, &c)| (e, c as i64))
        .collect();
    if !tail_terms.is_empty() || matches!(rest.cutoff(), Cutoff::At(_)) {
        let mut tail = LaurentSeries::from_pairs(p, &tail_terms);
        tail = tail.truncated(rest.cutoff());
        if matches!(rest.cutoff(), Cutoff::At(n) if n <= 0) {
            return Err(Error::PrecisionExhausted(
                "window too narrow to separate the tail".into(),
            ));
        }
        // y = -(tail + tail^p + tail^(p^2) + ...), the unique wp-preimage
        // inside t*F_p[[t]]
        let bound = Cutoff::At(window).min(tail.cutoff());
        let mut y = LaurentSeries::zero(p).truncated(bound);
        let mut power = tail.truncated(bound);
        while !power.is_zero_within_window() {
            y = y.sub(&power);
            power = power.frobenius().truncated(bound);
        }
        for (e, _) in tail_terms {
            rest.terms.remove(&e);
        }
        rest.cutoff = Cutoff::Unbounded;
        witness = witness.add(&y);
    }

    Ok((rest, witness))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn s(pairs: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_pairs(p3(), pairs)
    }

    #[test]
    fn valuation_examples() {
        // t^-7 + t^2 -> -7
        assert_eq!(
            s(&[(-7, 1), (2, 1)]).valuation().unwrap(),
            Valuation::Finite(-7)
        );
        // certified zero -> infinite marker
        assert_eq!(
            LaurentSeries::zero(p3()).valuation().unwrap(),
            Valuation::Infinite
        );
        // empty with a window of width 100 certifies zero below that horizon
        let windowed = LaurentSeries::zero(p3()).truncated(Cutoff::At(100));
        assert_eq!(windowed.valuation_up_to(100).unwrap(), Valuation::Infinite);
        assert_eq!(windowed.valuation_up_to(40).unwrap(), Valuation::Infinite);
        assert!(matches!(
            windowed.valuation_up_to(101),
            Err(Error::PrecisionExhausted(_))
        ));
        // an unqualified query refuses to guess
        assert!(matches!(
            windowed.valuation(),
            Err(Error::PrecisionExhausted(_))
        ));
        // wp(t^-1) at p = 3 has valuation -3
        let w = s(&[(-1, 1)]).wp();
        assert_eq!(w.valuation().unwrap(), Valuation::Finite(-3));
    }

    #[test]
    fn wp_examples() {
        // wp(t^-1) = t^-3 + 2 t^-1
        assert_eq!(s(&[(-1, 1)]).wp(), s(&[(-3, 1), (-1, 2)]));
        // wp of a constant vanishes (Fermat)
        for c in 0..3 {
            assert!(LaurentSeries::constant(p3(), c).wp().is_exact_zero());
        }
        // Frobenius is additive, wp(1) = 0
        assert_eq!(s(&[(-1, 1), (0, 1)]).wp(), s(&[(-3, 1), (-1, 2)]));
    }

    #[test]
    fn reduce_strips_p_divisible_leads() {
        // t^-9 + t^-1 reduces to 2 t^-1 in two strips
        let (red, y) = artin_schreier_reduce(&s(&[(-9, 1), (-1, 1)]), 64).unwrap();
        assert_eq!(red, s(&[(-1, 2)]));
        assert!(s(&[(-9, 1), (-1, 1)]).agrees_with(&red.add(&y.wp())));
    }

    #[test]
    fn reduce_leaves_reduced_input_alone() {
        let (red, y) = artin_schreier_reduce(&s(&[(-5, 1)]), 64).unwrap();
        assert_eq!(red, s(&[(-5, 1)]));
        assert!(y.is_exact_zero());
    }

    #[test]
    fn reduce_absorbs_positive_tail() {
        // t^2 is wp of an infinite tail; the reduced representative is 0
        let beta = s(&[(2, 1)]);
        let (red, y) = artin_schreier_reduce(&beta, 100).unwrap();
        assert!(red.is_exact_zero());
        assert!(beta.agrees_with(&y.wp()));
        assert!(!y.is_zero_within_window());
    }

    #[test]
    fn reduce_keeps_constants() {
        let (red, _) = artin_schreier_reduce(&s(&[(0, 1), (3, 2)]), 100).unwrap();
        assert_eq!(red, s(&[(0, 1)]));
    }

    #[test]
    fn binomial_examples() {
        let mu = s(&[(-1, 1)]);
        assert_eq!(mu.binomial(0).unwrap(), LaurentSeries::one(p3()));
        assert_eq!(mu.binomial(1).unwrap(), mu);
        // binom(t^-1, 2) = 2 t^-2 + t^-1
        assert_eq!(mu.binomial(2).unwrap(), s(&[(-2, 2), (-1, 1)]));
        assert!(mu.binomial(3).is_err());
    }

    #[test]
    fn product_cutoffs_are_conservative() {
        let a = s(&[(-2, 1)]).truncated(Cutoff::At(10));
        let b = s(&[(-3, 1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.cutoff(), Cutoff::At(7));
        assert_eq!(prod.coefficient(-5), 1);
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(s(&[(-1, 2), (0, 1), (2, 1)]).to_string(), "2*t^-1 + 1 + t^2");
        assert_eq!(LaurentSeries::zero(p3()).to_string(), "0");
    }
}
