//! The group algebra K0[G] for G = C_p x C_p or C_{p^2}, and the scaffold
//! elements built from it.
//!
//! Elements are stored on the group-element basis, which makes multiplication
//! a plain convolution and keeps the order relations exact. For the abelian
//! kind the basis is sigma2^a sigma1^b; for the cyclic kind it is sigma1^n
//! with sigma2 = sigma1^p folded into the exponent. A conversion into the
//! (sigma2-1)^i (sigma1-1)^j basis is provided for reports.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extension::{ExtensionData, ExtensionKind};
use crate::fp::{binomial_mod, Prime};
use crate::series::LaurentSeries;
use crate::tower::{GaloisGen, K2Element, Tower};

/// Element of K0[G] with Laurent-series coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAlgebraElement {
    p: Prime,
    kind: ExtensionKind,
    coeffs: Vec<LaurentSeries>, // length p^2
}

impl GroupAlgebraElement {
    pub fn zero(p: Prime, kind: ExtensionKind) -> Self {
        GroupAlgebraElement {
            p,
            kind,
            coeffs: vec![LaurentSeries::zero(p); (p.p() * p.p()) as usize],
        }
    }

    pub fn one(p: Prime, kind: ExtensionKind) -> Self {
        let mut e = Self::zero(p, kind);
        e.coeffs[0] = LaurentSeries::one(p);
        e
    }

    /// The generator sigma1 (index 1 in both normal forms).
    pub fn sigma1(p: Prime, kind: ExtensionKind) -> Self {
        let mut e = Self::zero(p, kind);
        e.coeffs[1] = LaurentSeries::one(p);
        e
    }

    /// The generator sigma2: sigma2^1 sigma1^0 abelian, sigma1^p cyclic.
    pub fn sigma2(p: Prime, kind: ExtensionKind) -> Self {
        let mut e = Self::zero(p, kind);
        e.coeffs[p.p() as usize] = LaurentSeries::one(p);
        e
    }

    pub fn kind(&self) -> ExtensionKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within_window())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    fn assert_compatible(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixed moduli in K0[G]");
        assert_eq!(self.kind, other.kind, "mixed group kinds in K0[G]");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        GroupAlgebraElement {
            p: self.p,
            kind: self.kind,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        GroupAlgebraElement {
            p: self.p,
            kind: self.kind,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        GroupAlgebraElement {
            p: self.p,
            kind: self.kind,
            coeffs,
        }
    }

    pub fn scale(&self, c: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        GroupAlgebraElement {
            p: self.p,
            kind: self.kind,
            coeffs,
        }
    }

    pub fn scale_series(&self, s: &LaurentSeries) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(s)).collect();
        GroupAlgebraElement {
            p: self.p,
            kind: self.kind,
            coeffs,
        }
    }

    /// Group convolution; G is abelian in both kinds, so this is commutative.
    pub fn mul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let q = self.p.p() as usize;
        let mut out = Self::zero(self.p, self.kind);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_exact_zero() {
                    continue;
                }
                let idx = match self.kind {
                    // sigma1 has order p^2 and the index is its exponent
                    ExtensionKind::Cyclic => (i + j) % (q * q),
                    // componentwise exponents of (sigma2, sigma1)
                    ExtensionKind::ElementaryAbelian => {
                        let (a2, a1) = (i / q, i % q);
                        let (b2, b1) = (j / q, j % q);
                        ((a2 + b2) % q) * q + (a1 + b1) % q
                    }
                };
                out.coeffs[idx] = out.coeffs[idx].add(&a.mul(b));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.p, self.kind);
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

    /// Sum of the coefficients; zero exactly when the element lies in the
    /// augmentation ideal.
    pub fn augmentation_sum(&self) -> LaurentSeries {
        let mut s = LaurentSeries::zero(self.p);
        for c in &self.coeffs {
            s = s.add(c);
        }
        s
    }

    /// Coefficients in the (sigma2-1)^i (sigma1-1)^j basis, indexed i*p+j.
    /// Uses sigma^n = sum binom(n,k)(sigma-1)^k, with (sigma1-1)^p exactly
    /// (sigma2-1) in the cyclic kind.
    pub fn to_sigma_basis(&self) -> Vec<LaurentSeries> {
        let q = self.p.p() as usize;
        let mut out = vec![LaurentSeries::zero(self.p); q * q];
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_exact_zero() {
                continue;
            }
            match self.kind {
                ExtensionKind::Cyclic => {
                    // k = k1*p + k0 corresponds to (s2-1)^k1 (s1-1)^k0
                    for (k, slot) in out.iter_mut().enumerate() {
                        let b = binomial_mod(self.p, n as u64, k as u64);
                        if b != 0 {
                            *slot = slot.add(&c.scale(b as i64));
                        }
                    }
                }
                ExtensionKind::ElementaryAbelian => {
                    let (a2, a1) = (n / q, n % q);
                    for i in 0..q {
                        for j in 0..q {
                            let b = self.p.mul(
                                binomial_mod(self.p, a2 as u64, i as u64),
                                binomial_mod(self.p, a1 as u64, j as u64),
                            );
                            if b != 0 {
                                out[i * q + j] = out[i * q + j].add(&c.scale(b as i64));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Module action on K2: sum over group elements of coeff * g(x). The
    /// orbit chains stop at the last nonzero coefficient.
    pub fn apply(&self, tower: &Tower, x: &K2Element) -> K2Element {
        assert_eq!(self.kind, tower.ext().kind(), "kind mismatch in apply");
        let q = self.p.p() as usize;
        let mut acc = K2Element::zero(self.p);
        let last = match self.coeffs.iter().rposition(|c| !c.is_exact_zero()) {
            Some(n) => n,
            None => return acc,
        };
        match self.kind {
            ExtensionKind::Cyclic => {
                let mut orbit = x.clone();
                for (n, c) in self.coeffs.iter().enumerate().take(last + 1) {
                    if n > 0 {
                        orbit = tower.galois_apply(GaloisGen::Sigma1, &orbit);
                    }
                    if !c.is_exact_zero() {
                        acc = acc.add(&orbit.scale_series(c));
                    }
                }
            }
            ExtensionKind::ElementaryAbelian => {
                let mut row = x.clone();
                for a2 in 0..=last / q {
                    if a2 > 0 {
                        row = tower.galois_apply(GaloisGen::Sigma2, &row);
                    }
                    let mut orbit = row.clone();
                    for a1 in 0..q {
                        if a1 > 0 {
                            orbit = tower.galois_apply(GaloisGen::Sigma1, &orbit);
                        }
                        let c = &self.coeffs[a2 * q + a1];
                        if !c.is_exact_zero() {
                            acc = acc.add(&orbit.scale_series(c));
                        }
                    }
                }
            }
        }
        acc
    }
}

/// Truncated exponentiation sigma2^[mu] = sum_{i<p} binom(mu,i)(sigma2-1)^i.
pub fn truncated_exp(
    p: Prime,
    kind: ExtensionKind,
    mu: &LaurentSeries,
) -> Result<GroupAlgebraElement> {
    let psi2 = GroupAlgebraElement::sigma2(p, kind).sub(&GroupAlgebraElement::one(p, kind));
    let mut acc = GroupAlgebraElement::zero(p, kind);
    let mut power = GroupAlgebraElement::one(p, kind);
    for i in 0..p.p() {
        if i > 0 {
            power = power.mul(&psi2);
        }
        acc = acc.add(&power.scale_series(&mu.binomial(i)?));
    }
    Ok(acc)
}

/// The scaffold pair Psi1, Psi2 with the break data they act by.
#[derive(Debug, Clone)]
pub struct Scaffold {
    pub psi1: GroupAlgebraElement,
    pub psi2: GroupAlgebraElement,
    pub p: Prime,
    pub kind: ExtensionKind,
    pub b1: i64,
    pub b2: i64,
}

/// Build the scaffold Psi1 = sigma1 * sigma2^[mu] - 1, Psi2 = sigma2 - 1 and
/// verify its exact order relations.
pub fn build_scaffold(ext: &ExtensionData) -> Result<Scaffold> {
    if !ext.hypotheses_hold() {
        return Err(Error::HypothesisViolated(
            "scaffold construction requires the break-gap and error-term conditions".into(),
        ));
    }
    scaffold_unchecked(ext)
}

/// The same construction without the hypothesis gate; the valuation law is
/// then not guaranteed. Used by diagnostics that probe failing extensions.
pub fn scaffold_unchecked(ext: &ExtensionData) -> Result<Scaffold> {
    let p = ext.prime();
    let kind = ext.kind();
    let one = GroupAlgebraElement::one(p, kind);
    let psi1 = GroupAlgebraElement::sigma1(p, kind)
        .mul(&truncated_exp(p, kind, ext.mu())?)
        .sub(&one);
    let psi2 = GroupAlgebraElement::sigma2(p, kind).sub(&one);
    let sc = Scaffold {
        psi1,
        psi2,
        p,
        kind,
        b1: ext.b1(),
        b2: ext.b2(),
    };
    if !relations_hold(&sc) {
        return Err(Error::HypothesisViolated(
            "scaffold order relations failed".into(),
        ));
    }
    Ok(sc)
}

/// Exact group-algebra identities: Psi2^p = 0 always, and Psi1^p = Psi2
/// (cyclic) or Psi1^p = 0 (abelian).
pub fn relations_hold(sc: &Scaffold) -> bool {
    let q = sc.p.p();
    if !sc.psi2.pow(q).is_exact_zero() {
        return false;
    }
    let psi1_p = sc.psi1.pow(q);
    match sc.kind {
        ExtensionKind::Cyclic => psi1_p == sc.psi2,
        ExtensionKind::ElementaryAbelian => psi1_p.is_exact_zero(),
    }
}

/// Psi^(a) = Psi2^(high digit) * Psi1^(low digit) for a < p^2, zero beyond.
pub fn psi_product(sc: &Scaffold, a: u64) -> GroupAlgebraElement {
    let q = sc.p.p() as u64;
    if a >= q * q {
        return GroupAlgebraElement::zero(sc.p, sc.kind);
    }
    let (hi, lo) = ((a / q) as u32, (a % q) as u32);
    sc.psi2.pow(hi).mul(&sc.psi1.pow(lo))
}

/// Render a group-algebra element in the (sigma2-1)^i (sigma1-1)^j basis.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaBasisTerm {
    pub i: usize,
    pub j: usize,
    pub coefficient: LaurentSeries,
}

pub fn sigma_basis_terms(a: &GroupAlgebraElement) -> Vec<SigmaBasisTerm> {
    let q = a.coeffs().len().isqrt();
    a.to_sigma_basis()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero_within_window())
        .map(|(idx, c)| SigmaBasisTerm {
            i: idx / q,
            j: idx % q,
            coefficient: c,
        })
        .collect()
}
