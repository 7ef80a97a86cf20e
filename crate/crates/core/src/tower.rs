//! Arithmetic in the tower K0 < K1 < K2 and valuation machinery.
//!
//! K1 = K0(x1) with wp(x1) = beta1, K2 = K0(x1, x2) where wp(x2) is beta2
//! (elementary abelian) or D1 + beta2 (cyclic). Elements are stored in the
//! monomial basis x2^i * x1^j, which is closed under multiplication and the
//! Galois action. Valuations are read off through the adapted basis
//! alpha_{i,j} = binom(X2, i) * binom(x1, j) with X2 = x2 - mu*x1: its
//! members have the p^2 pairwise distinct valuations -i*b2 - j*p*b1 mod p^2,
//! so no cancellation can hide the minimum.

use rand::rngs::StdRng;
use rand::Rng;

use crate::error::{Error, Result};
use crate::extension::{ExtensionData, ExtensionKind};
use crate::fp::{binom_p_over_p, Prime};
use crate::series::{Cutoff, LaurentSeries, Valuation};

/// Element of K1 as a polynomial of degree < p in x1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K1Element {
    coeffs: Vec<LaurentSeries>,
}

impl K1Element {
    pub fn zero(p: Prime) -> Self {
        K1Element {
            coeffs: vec![LaurentSeries::zero(p); p.p() as usize],
        }
    }

    pub fn from_coeffs(coeffs: Vec<LaurentSeries>) -> Self {
        K1Element { coeffs }
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn constant(p: Prime, s: &LaurentSeries) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[0] = s.clone();
        e
    }

    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within_window())
    }
}

/// Element of K2 as sum c_{ij} x2^i x1^j with 0 <= i, j < p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct K2Element {
    p: Prime,
    coeffs: Vec<LaurentSeries>, // index i*p + j
}

impl K2Element {
    pub fn zero(p: Prime) -> Self {
        K2Element {
            p,
            coeffs: vec![LaurentSeries::zero(p); (p.p() * p.p()) as usize],
        }
    }

    pub fn one(p: Prime) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[0] = LaurentSeries::one(p);
        e
    }

    pub fn x1(p: Prime) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[1] = LaurentSeries::one(p);
        e
    }

    pub fn x2(p: Prime) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[p.p() as usize] = LaurentSeries::one(p);
        e
    }

    pub fn scalar(p: Prime, s: &LaurentSeries) -> Self {
        let mut e = Self::zero(p);
        e.coeffs[0] = s.clone();
        e
    }

    pub fn from_k1(p: Prime, k1: &K1Element) -> Self {
        let mut e = Self::zero(p);
        for (j, c) in k1.coeffs().iter().enumerate() {
            e.coeffs[j] = c.clone();
        }
        e
    }

    pub fn coeff(&self, i: usize, j: usize) -> &LaurentSeries {
        &self.coeffs[i * self.p.p() as usize + j]
    }

    pub fn coeffs(&self) -> &[LaurentSeries] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        K2Element { p: self.p, coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        K2Element { p: self.p, coeffs }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.neg()).collect();
        K2Element { p: self.p, coeffs }
    }

    /// Multiply by an element of K0.
    pub fn scale_series(&self, s: &LaurentSeries) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.mul(s)).collect();
        K2Element { p: self.p, coeffs }
    }

    pub fn scale(&self, c: i64) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.scale(c)).collect();
        K2Element { p: self.p, coeffs }
    }

    pub fn is_zero_within_window(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_within_window())
    }

    pub fn is_exact_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_exact_zero())
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .all(|(a, b)| a.agrees_with(b))
    }
}

/// The two distinguished Galois generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaloisGen {
    Sigma1,
    Sigma2,
}

/// Computation context for one extension: precomputed relation values,
/// Galois images, and the valuation-adapted basis.
pub struct Tower {
    ext: ExtensionData,
    /// x2^p - x2 as an element of K1.
    wp_x2: K1Element,
    /// C1 and D1 (cyclic kind only).
    c1: Option<K1Element>,
    d1: Option<K1Element>,
    /// sigma_images[g][i*p+j] = g(x2)^i * g(x1)^j.
    sigma_images: [Vec<K2Element>; 2],
    /// X2 = x2 - mu*x1.
    x2_adjusted: K2Element,
    /// alpha_{i,j} = binom(X2,i)*binom(x1,j), indexed i*p+j.
    alphas: Vec<K2Element>,
    /// Valuations -i*b2 - j*p*b1 of the alphas, same indexing.
    alpha_vals: Vec<i64>,
}

impl Tower {
    pub fn new(ext: ExtensionData) -> Result<Self> {
        let p = ext.prime();
        let q = p.p() as usize;

        let (c1, d1) = match ext.kind() {
            ExtensionKind::Cyclic => {
                let c1 = c1_element(&ext)?;
                let d1 = d1_element(&ext)?;
                (Some(c1), Some(d1))
            }
            ExtensionKind::ElementaryAbelian => (None, None),
        };

        let wp_x2 = match ext.kind() {
            ExtensionKind::ElementaryAbelian => K1Element::constant(p, ext.beta2()),
            ExtensionKind::Cyclic => {
                let mut w = d1.clone().unwrap();
                w.coeffs[0] = w.coeffs[0].add(ext.beta2());
                w
            }
        };

        let mut tower = Tower {
            ext,
            wp_x2,
            c1,
            d1,
            sigma_images: [Vec::new(), Vec::new()],
            x2_adjusted: K2Element::zero(p),
            alphas: Vec::new(),
            alpha_vals: Vec::new(),
        };

        // Galois images of the basis monomials for each generator.
        for gen in [GaloisGen::Sigma1, GaloisGen::Sigma2] {
            let (gx1, gx2) = tower.generator_images(gen);
            let mut x2_pows = Vec::with_capacity(q);
            let mut x1_pows = Vec::with_capacity(q);
            let mut acc = K2Element::one(p);
            for _ in 0..q {
                x2_pows.push(acc.clone());
                acc = tower.mul(&acc, &gx2);
            }
            acc = K2Element::one(p);
            for _ in 0..q {
                x1_pows.push(acc.clone());
                acc = tower.mul(&acc, &gx1);
            }
            let mut table = Vec::with_capacity(q * q);
            for hi in &x2_pows {
                for lo in &x1_pows {
                    table.push(tower.mul(hi, lo));
                }
            }
            tower.sigma_images[gen as usize] = table;
        }

        // X2 and the adapted basis.
        tower.x2_adjusted = K2Element::x2(p).sub(&K2Element::x1(p).scale_series(tower.ext.mu()));
        let mut alphas = Vec::with_capacity(q * q);
        let mut alpha_vals = Vec::with_capacity(q * q);
        for i in 0..q {
            let bx2 = tower.k2_binomial(&tower.x2_adjusted.clone(), i as u32)?;
            for j in 0..q {
                let bx1 = tower.k2_binomial(&K2Element::x1(p), j as u32)?;
                alphas.push(tower.mul(&bx2, &bx1));
                alpha_vals
                    .push(-(i as i64) * tower.ext.b2() - (j as i64) * p.p() as i64 * tower.ext.b1());
            }
        }
        tower.alphas = alphas;
        tower.alpha_vals = alpha_vals;
        Ok(tower)
    }

    pub fn ext(&self) -> &ExtensionData {
        &self.ext
    }

    pub fn prime(&self) -> Prime {
        self.ext.prime()
    }

    /// x2^p - x2 as an element of K1.
    pub fn wp_x2(&self) -> &K1Element {
        &self.wp_x2
    }

    /// (sigma1 - 1)x2 for the cyclic kind.
    pub fn c1(&self) -> Option<&K1Element> {
        self.c1.as_ref()
    }

    pub fn d1(&self) -> Option<&K1Element> {
        self.d1.as_ref()
    }

    fn generator_images(&self, gen: GaloisGen) -> (K2Element, K2Element) {
        let p = self.ext.prime();
        let one = K2Element::one(p);
        match (gen, self.ext.kind()) {
            (GaloisGen::Sigma1, ExtensionKind::ElementaryAbelian) => {
                (K2Element::x1(p).add(&one), K2Element::x2(p))
            }
            (GaloisGen::Sigma2, _) => (K2Element::x1(p), K2Element::x2(p).add(&one)),
            (GaloisGen::Sigma1, ExtensionKind::Cyclic) => {
                let c1 = K2Element::from_k1(p, self.c1.as_ref().unwrap());
                (K2Element::x1(p).add(&one), K2Element::x2(p).add(&c1))
            }
        }
    }

    // ---- ring structure -------------------------------------------------

    /// Product in K2, reduced by x1^p = x1 + beta1 and x2^p = x2 + wp(x2).
    pub fn mul(&self, a: &K2Element, b: &K2Element) -> K2Element {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let width = 2 * q - 1;
        let zero = LaurentSeries::zero(p);
        let mut buf = vec![zero.clone(); width * width];
        for i in 0..q {
            for j in 0..q {
                let ca = a.coeff(i, j);
                if ca.is_exact_zero() {
                    continue;
                }
                for k in 0..q {
                    for l in 0..q {
                        let cb = b.coeff(k, l);
                        if cb.is_exact_zero() {
                            continue;
                        }
                        let idx = (i + k) * width + (j + l);
                        buf[idx] = buf[idx].add(&ca.mul(cb));
                    }
                }
            }
        }
        self.fold_x1(&mut buf, width);
        self.fold_x2(&mut buf, width);
        self.fold_x1(&mut buf, width);
        let mut out = K2Element::zero(p);
        for i in 0..q {
            for j in 0..q {
                out.coeffs[i * q + j] = std::mem::replace(&mut buf[i * width + j], zero.clone());
            }
        }
        out
    }

    fn fold_x1(&self, buf: &mut [LaurentSeries], width: usize) {
        let q = self.ext.prime().p() as usize;
        for i in 0..width {
            for j in (q..width).rev() {
                let c = std::mem::replace(&mut buf[i * width + j], LaurentSeries::zero(self.ext.prime()));
                if c.is_exact_zero() {
                    continue;
                }
                // x1^j = x1^(j-p) * (x1 + beta1)
                let lo = i * width + (j - q);
                buf[lo + 1] = buf[lo + 1].add(&c);
                buf[lo] = buf[lo].add(&c.mul(self.ext.beta1()));
            }
        }
    }

    fn fold_x2(&self, buf: &mut [LaurentSeries], width: usize) {
        let q = self.ext.prime().p() as usize;
        for i in (q..width).rev() {
            for j in 0..width {
                let c = std::mem::replace(&mut buf[i * width + j], LaurentSeries::zero(self.ext.prime()));
                if c.is_exact_zero() {
                    continue;
                }
                // x2^i = x2^(i-p) * (x2 + wp_x2); wp_x2 has x1-degree < p
                let row = i - q;
                buf[(row + 1) * width + j] = buf[(row + 1) * width + j].add(&c);
                for (d, w) in self.wp_x2.coeffs().iter().enumerate() {
                    if w.is_exact_zero() {
                        continue;
                    }
                    buf[row * width + (j + d)] = buf[row * width + (j + d)].add(&c.mul(w));
                }
            }
        }
    }

    pub fn k2_pow(&self, a: &K2Element, mut e: u32) -> K2Element {
        let mut acc = K2Element::one(self.ext.prime());
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// binom(a, i) = a(a-1)...(a-i+1)/i! in K2, for i < p.
    pub fn k2_binomial(&self, a: &K2Element, i: u32) -> Result<K2Element> {
        let p = self.ext.prime();
        if i >= p.p() {
            return Err(Error::InvalidInput(format!(
                "binom(-, {i}) needs i < p = {}",
                p.p()
            )));
        }
        let mut acc = K2Element::one(p);
        let mut fact = 1u64;
        for k in 0..i {
            acc = self.mul(&acc, &a.sub(&K2Element::one(p).scale(k as i64)));
            fact *= (k + 1) as u64;
        }
        Ok(acc.scale(p.inv_int(fact) as i64))
    }

    pub fn k1_mul(&self, a: &K1Element, b: &K1Element) -> K1Element {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let mut buf = vec![LaurentSeries::zero(p); 2 * q - 1];
        for (i, ca) in a.coeffs().iter().enumerate() {
            if ca.is_exact_zero() {
                continue;
            }
            for (j, cb) in b.coeffs().iter().enumerate() {
                if cb.is_exact_zero() {
                    continue;
                }
                buf[i + j] = buf[i + j].add(&ca.mul(cb));
            }
        }
        for j in (q..buf.len()).rev() {
            let c = std::mem::replace(&mut buf[j], LaurentSeries::zero(p));
            if c.is_exact_zero() {
                continue;
            }
            buf[j - q + 1] = buf[j - q + 1].add(&c);
            buf[j - q] = buf[j - q].add(&c.mul(self.ext.beta1()));
        }
        buf.truncate(q);
        K1Element::from_coeffs(buf)
    }

    // ---- Galois action --------------------------------------------------

    /// Apply a Galois generator; a ring automorphism fixing K0.
    pub fn galois_apply(&self, gen: GaloisGen, a: &K2Element) -> K2Element {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let table = &self.sigma_images[gen as usize];
        let mut out = K2Element::zero(p);
        for i in 0..q {
            for j in 0..q {
                let c = a.coeff(i, j);
                if c.is_exact_zero() {
                    continue;
                }
                out = out.add(&table[i * q + j].scale_series(c));
            }
        }
        out
    }

    /// Norm from K2 to K1: the product of the sigma2-orbit. Used as the
    /// independent cross-check for K2 valuations.
    pub fn norm_to_k1(&self, a: &K2Element) -> Result<K1Element> {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let mut orbit = a.clone();
        let mut acc = a.clone();
        for _ in 1..q {
            orbit = self.galois_apply(GaloisGen::Sigma2, &orbit);
            acc = self.mul(&acc, &orbit);
        }
        for i in 1..q {
            for j in 0..q {
                if !acc.coeff(i, j).is_zero_within_window() {
                    return Err(Error::PrecisionExhausted(format!(
                        "norm retained an x2^{i} component; increase the window"
                    )));
                }
            }
        }
        Ok(K1Element::from_coeffs(acc.coeffs[..q].to_vec()))
    }

    // ---- valuations -----------------------------------------------------

    /// Valuation on K1 via v1(x1) = -b1 and the distinct residues of
    /// p*v0(c_j) - j*b1 modulo p.
    pub fn k1_valuation(&self, a: &K1Element) -> Result<i64> {
        let p = self.ext.prime();
        let q = p.p() as i64;
        let mut best: Option<i64> = None;
        let mut hidden: Option<i64> = None;
        for (j, c) in a.coeffs().iter().enumerate() {
            let shift = -(j as i64) * self.ext.b1();
            match c.valuation() {
                Ok(Valuation::Finite(v)) => {
                    let cand = q * v + shift;
                    best = Some(best.map_or(cand, |b| b.min(cand)));
                }
                Ok(Valuation::Infinite) => {}
                Err(_) => {
                    let bound = match c.cutoff() {
                        Cutoff::At(n) => q * n + shift,
                        Cutoff::Unbounded => unreachable!(),
                    };
                    hidden = Some(hidden.map_or(bound, |h| h.min(bound)));
                }
            }
        }
        match best {
            Some(v) => {
                if let Some(h) = hidden {
                    if h < v {
                        return Err(Error::PrecisionExhausted(
                            "a hidden K1 coefficient could dominate the valuation".into(),
                        ));
                    }
                }
                Ok(v)
            }
            None => Err(match hidden {
                Some(_) => Error::PrecisionExhausted(
                    "K1 element is zero within the window; valuation unknown".into(),
                ),
                None => Error::InvalidInput("valuation of the zero element of K1".into()),
            }),
        }
    }

    /// Coordinates of `a` in the adapted basis: a = sum c_{ij} alpha_{i,j}.
    /// The change of basis from monomials is triangular with invertible
    /// scalar diagonal 1/(i! j!).
    pub fn to_alpha_basis(&self, a: &K2Element) -> Result<Vec<LaurentSeries>> {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let mut rest = a.clone();
        let mut out = vec![LaurentSeries::zero(p); q * q];
        let mut fact = vec![1u64; q];
        for k in 1..q {
            fact[k] = fact[k - 1] * k as u64;
        }
        for i in (0..q).rev() {
            for j in (0..q).rev() {
                let unit = p.mul(
                    p.reduce(fact[i] as i64 % p.p() as i64),
                    p.reduce(fact[j] as i64 % p.p() as i64),
                );
                let c = rest.coeff(i, j).scale(unit as i64);
                if !c.is_exact_zero() {
                    rest = rest.sub(&self.alphas[i * q + j].scale_series(&c));
                }
                out[i * q + j] = c;
            }
        }
        debug_assert!(rest.is_zero_within_window());
        Ok(out)
    }

    pub fn alpha(&self, i: usize, j: usize) -> &K2Element {
        &self.alphas[i * self.ext.prime().p() as usize + j]
    }

    pub fn alpha_valuation(&self, i: usize, j: usize) -> i64 {
        self.alpha_vals[i * self.ext.prime().p() as usize + j]
    }

    /// X2 = x2 - mu*x1 (the error-term correction is not needed under the
    /// scaffold hypotheses).
    pub fn x2_adjusted(&self) -> &K2Element {
        &self.x2_adjusted
    }

    /// X2 together with the runtime verification v2(X2) = -b2 through the
    /// norm identity.
    pub fn x2_adjusted_verified(&self) -> Result<&K2Element> {
        let norm = self.norm_to_k1(&self.x2_adjusted)?;
        let v = self.k1_valuation(&norm)?;
        if v != -self.ext.b2() {
            return Err(Error::HypothesisViolated(format!(
                "v2(X2) = {v} but -b2 = {}",
                -self.ext.b2()
            )));
        }
        Ok(&self.x2_adjusted)
    }

    fn check_distinct_residues(&self) -> Result<()> {
        let q2 = (self.ext.prime().p() * self.ext.prime().p()) as i64;
        let mut seen = vec![false; q2 as usize];
        for &v in &self.alpha_vals {
            let r = v.rem_euclid(q2) as usize;
            if seen[r] {
                return Err(Error::HypothesisViolated(
                    "alpha-basis valuations are not distinct mod p^2".into(),
                ));
            }
            seen[r] = true;
        }
        Ok(())
    }

    /// Valuation on K2 through the adapted basis.
    pub fn k2_valuation(&self, a: &K2Element) -> Result<i64> {
        self.check_distinct_residues()?;
        let p = self.ext.prime();
        let q = p.p() as usize;
        let q2 = (q * q) as i64;
        let coords = self.to_alpha_basis(a)?;
        let mut best: Option<i64> = None;
        let mut hidden: Option<i64> = None;
        for (idx, c) in coords.iter().enumerate() {
            let shift = self.alpha_vals[idx];
            match c.valuation() {
                Ok(Valuation::Finite(v)) => {
                    let cand = q2 * v + shift;
                    best = Some(best.map_or(cand, |b| b.min(cand)));
                }
                Ok(Valuation::Infinite) => {}
                Err(_) => {
                    let bound = match c.cutoff() {
                        Cutoff::At(n) => q2 * n + shift,
                        Cutoff::Unbounded => unreachable!(),
                    };
                    hidden = Some(hidden.map_or(bound, |h| h.min(bound)));
                }
            }
        }
        match best {
            Some(v) => {
                if let Some(h) = hidden {
                    if h < v {
                        return Err(Error::PrecisionExhausted(
                            "a hidden alpha coordinate could dominate the valuation".into(),
                        ));
                    }
                }
                Ok(v)
            }
            None => Err(match hidden {
                Some(_) => Error::PrecisionExhausted(
                    "K2 element is zero within the window; valuation unknown".into(),
                ),
                None => Error::InvalidInput("valuation of the zero element of K2".into()),
            }),
        }
    }

    /// Certify v2(a) >= threshold without necessarily determining v2(a).
    /// An element that is zero within a sufficiently deep window passes.
    pub fn k2_valuation_at_least(&self, a: &K2Element, threshold: i64) -> Result<bool> {
        self.check_distinct_residues()?;
        let q = self.ext.prime().p() as usize;
        let q2 = (q * q) as i64;
        let coords = self.to_alpha_basis(a)?;
        let mut uncertain = false;
        for (idx, c) in coords.iter().enumerate() {
            let shift = self.alpha_vals[idx];
            match c.valuation() {
                Ok(Valuation::Finite(v)) => {
                    if q2 * v + shift < threshold {
                        return Ok(false);
                    }
                }
                Ok(Valuation::Infinite) => {}
                Err(_) => {
                    let bound = match c.cutoff() {
                        Cutoff::At(n) => q2 * n + shift,
                        Cutoff::Unbounded => unreachable!(),
                    };
                    if bound < threshold {
                        uncertain = true;
                    }
                }
            }
        }
        if uncertain {
            Err(Error::PrecisionExhausted(
                "cannot certify the valuation bound inside the window".into(),
            ))
        } else {
            Ok(true)
        }
    }

    // ---- sampling ---------------------------------------------------------

    /// Deterministic-from-seed element with v2 in a prescribed residue class
    /// mod p^2: the unique alpha_{i,j} in that class, shifted by a power of
    /// t, plus strictly higher-valuation noise terms. Seed 0 produces the
    /// bare noise-free sample t^k * alpha_{i,j}.
    pub fn sample_with_valuation(&self, target_residue: i64, seed: u64) -> Result<K2Element> {
        use rand::SeedableRng;
        self.check_distinct_residues()?;
        let mut rng = StdRng::seed_from_u64(seed);
        let p = self.ext.prime();
        let q = p.p() as usize;
        let q2 = (q * q) as i64;
        let target = target_residue.rem_euclid(q2);
        let base_idx = (0..q * q)
            .find(|&idx| self.alpha_vals[idx].rem_euclid(q2) == target)
            .expect("distinct residues cover every class");

        let shift = rng.gen_range(-2..=2);
        let unit = rng.gen_range(1..p.p()) as i64;
        let mut sample = self.alphas[base_idx]
            .scale_series(&LaurentSeries::monomial(p, shift, unit));
        let base_val = q2 * shift + self.alpha_vals[base_idx];

        let noise_terms = if seed == 0 { 0 } else { rng.gen_range(1..=3) };
        for _ in 0..noise_terms {
            let idx = rng.gen_range(0..q * q);
            // smallest power of t lifting this alpha strictly above base_val
            let min_exp = (base_val + 1 - self.alpha_vals[idx]).div_euclid(q2)
                + i64::from((base_val + 1 - self.alpha_vals[idx]).rem_euclid(q2) != 0);
            let exp = min_exp + rng.gen_range(0..3);
            let unit = rng.gen_range(1..p.p()) as i64;
            sample = sample.add(
                &self.alphas[idx].scale_series(&LaurentSeries::monomial(p, exp, unit)),
            );
        }
        Ok(sample)
    }

    /// Noise-free variant: exactly t^shift * alpha_{p-1,p-1}-style base.
    pub fn sample_bare(&self, target_residue: i64, shift: i64) -> Result<K2Element> {
        self.check_distinct_residues()?;
        let p = self.ext.prime();
        let q = p.p() as usize;
        let q2 = (q * q) as i64;
        let target = target_residue.rem_euclid(q2);
        let base_idx = (0..q * q)
            .find(|&idx| self.alpha_vals[idx].rem_euclid(q2) == target)
            .expect("distinct residues cover every class");
        Ok(self.alphas[base_idx].scale_series(&LaurentSeries::monomial(p, shift, 1)))
    }

    /// Element with exact valuation `v` (which must be attainable, i.e.
    /// congruent to some alpha valuation mod p^2).
    pub fn element_with_valuation(&self, v: i64) -> Result<K2Element> {
        let p = self.ext.prime();
        let q = p.p() as usize;
        let q2 = (q * q) as i64;
        let idx = (0..q * q)
            .find(|&idx| self.alpha_vals[idx].rem_euclid(q2) == v.rem_euclid(q2))
            .expect("distinct residues cover every class");
        let shift = (v - self.alpha_vals[idx]) / q2;
        Ok(self.alphas[idx].scale_series(&LaurentSeries::monomial(p, shift, 1)))
    }
}

/// C1 = -(1/p) * sum binom(p,i) x1^i: the value of (sigma1 - 1)x2 in the
/// cyclic kind; v1(C1) = -(p-1)*b1.
pub fn c1_element(ext: &ExtensionData) -> Result<K1Element> {
    let p = ext.prime();
    let mut coeffs = vec![LaurentSeries::zero(p); p.p() as usize];
    for i in 1..p.p() {
        let c = p.neg(binom_p_over_p(p, i)?);
        coeffs[i as usize] = LaurentSeries::constant(p, c as i64);
    }
    Ok(K1Element::from_coeffs(coeffs))
}

/// D1 = -(1/p) * sum binom(p,i) x1^i beta1^(p-i); v1(D1) = -(p^2-p+1)*b1.
pub fn d1_element(ext: &ExtensionData) -> Result<K1Element> {
    let p = ext.prime();
    let mut coeffs = vec![LaurentSeries::zero(p); p.p() as usize];
    for i in 1..p.p() {
        let c = p.neg(binom_p_over_p(p, i)?);
        coeffs[i as usize] = ext.beta1().pow(p.p() - i).scale(c as i64);
    }
    Ok(K1Element::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::build_extension;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn s(p: Prime, pairs: &[(i64, i64)]) -> LaurentSeries {
        LaurentSeries::from_pairs(p, pairs)
    }

    fn running_example() -> Tower {
        let p = p3();
        let ext = build_extension(
            p,
            ExtensionKind::Cyclic,
            &s(p, &[(-1, 1)]),
            &s(p, &[(-7, 1)]),
            None,
        )
        .unwrap();
        Tower::new(ext).unwrap()
    }

    fn abelian_example() -> Tower {
        let p = p3();
        let ext = build_extension(
            p,
            ExtensionKind::ElementaryAbelian,
            &s(p, &[(-1, 1)]),
            &s(p, &[(-7, 1)]),
            None,
        )
        .unwrap();
        Tower::new(ext).unwrap()
    }

    #[test]
    fn c1_d1_match_small_primes() {
        let t = running_example();
        let p = p3();
        // C1 = -x1 - x1^2
        let c1 = t.c1().unwrap();
        assert_eq!(c1.coeffs()[1], LaurentSeries::constant(p, -1));
        assert_eq!(c1.coeffs()[2], LaurentSeries::constant(p, -1));
        // D1 = -beta1^2 x1 - beta1 x1^2
        let d1 = t.d1().unwrap();
        assert_eq!(d1.coeffs()[1], s(p, &[(-2, 2)]));
        assert_eq!(d1.coeffs()[2], s(p, &[(-1, 2)]));
        // v1 checks
        assert_eq!(t.k1_valuation(c1).unwrap(), -2);
        assert_eq!(t.k1_valuation(d1).unwrap(), -7);
    }

    #[test]
    fn defining_relation_x1() {
        let t = running_example();
        let p = p3();
        let x1 = K2Element::x1(p);
        let cube = t.mul(&x1, &t.mul(&x1, &x1));
        let expected = x1.add(&K2Element::scalar(p, t.ext().beta1()));
        assert!(cube.agrees_with(&expected));
    }

    #[test]
    fn defining_relation_x2_cyclic() {
        let t = running_example();
        let p = p3();
        let x2 = K2Element::x2(p);
        let cube = t.k2_pow(&x2, 3);
        let mut w = K2Element::from_k1(p, t.wp_x2());
        w = w.add(&x2);
        assert!(cube.agrees_with(&w));
    }

    #[test]
    fn galois_action_on_generators() {
        let t = running_example();
        let p = p3();
        let x1 = K2Element::x1(p);
        let x2 = K2Element::x2(p);
        let one = K2Element::one(p);
        assert!(t
            .galois_apply(GaloisGen::Sigma2, &x2)
            .agrees_with(&x2.add(&one)));
        assert!(t
            .galois_apply(GaloisGen::Sigma1, &x1)
            .agrees_with(&x1.add(&one)));
        assert!(t.galois_apply(GaloisGen::Sigma2, &x1).agrees_with(&x1));
    }

    #[test]
    fn sigma1_to_the_p_equals_sigma2() {
        for t in [running_example(), abelian_example()] {
            let p = p3();
            let x2 = K2Element::x2(p);
            let mut y = x2.clone();
            for _ in 0..3 {
                y = t.galois_apply(GaloisGen::Sigma1, &y);
            }
            let expected = match t.ext().kind() {
                ExtensionKind::Cyclic => x2.add(&K2Element::one(p)),
                ExtensionKind::ElementaryAbelian => x2.clone(),
            };
            assert!(y.agrees_with(&expected));
        }
    }

    #[test]
    fn norm_examples() {
        let t = running_example();
        let p = p3();
        // norm(1) = 1
        let n1 = t.norm_to_k1(&K2Element::one(p)).unwrap();
        assert_eq!(n1.coeffs()[0], LaurentSeries::one(p));
        // norm(x1) = x1^p = x1 + beta1
        let nx1 = t.norm_to_k1(&K2Element::x1(p)).unwrap();
        assert_eq!(nx1.coeffs()[1], LaurentSeries::one(p));
        assert_eq!(nx1.coeffs()[0], *t.ext().beta1());
        // norm(X2) = wp(X2)
        let x2t = t.x2_adjusted().clone();
        let norm = t.norm_to_k1(&x2t).unwrap();
        let v = t.k1_valuation(&norm).unwrap();
        assert_eq!(v, -19);
    }

    #[test]
    fn x2_adjusted_has_break_valuation() {
        let t = running_example();
        assert!(t.x2_adjusted_verified().is_ok());
        assert_eq!(t.k2_valuation(t.x2_adjusted()).unwrap(), -19);
    }

    #[test]
    fn alpha_coordinates_examples() {
        let t = running_example();
        let p = p3();
        let coords = t.to_alpha_basis(&K2Element::one(p)).unwrap();
        assert_eq!(coords[0], LaurentSeries::one(p));
        assert!(coords[1..].iter().all(|c| c.is_exact_zero()));
        // x2 = X2 + mu*x1
        let coords = t.to_alpha_basis(&K2Element::x2(p)).unwrap();
        assert_eq!(coords[3], LaurentSeries::one(p)); // alpha_{1,0}
        assert_eq!(coords[1], *t.ext().mu()); // alpha_{0,1}
        // binom(x1, 2) is alpha_{0,2}
        let b = t.k2_binomial(&K2Element::x1(p), 2).unwrap();
        let coords = t.to_alpha_basis(&b).unwrap();
        assert_eq!(coords[2], LaurentSeries::one(p));
    }

    #[test]
    fn k2_valuation_examples() {
        let t = running_example();
        let p = p3();
        assert_eq!(t.k2_valuation(&K2Element::x1(p)).unwrap(), -3);
        assert_eq!(t.k2_valuation(t.x2_adjusted()).unwrap(), -19);
        // alpha_{2,2}: -2*19 - 2*3 = -44, congruent to b2 mod 9
        assert_eq!(t.k2_valuation(t.alpha(2, 2)).unwrap(), -44);
        assert_eq!((-44i64).rem_euclid(9), 19i64.rem_euclid(9));
    }

    #[test]
    fn sampling_hits_residues() {
        let t = running_example();
        let b2 = t.ext().b2();
        for seed in 0..6u64 {
            let sample = t.sample_with_valuation(b2, seed).unwrap();
            let v = t.k2_valuation(&sample).unwrap();
            assert_eq!(v.rem_euclid(9), b2.rem_euclid(9));
        }
        // seed 0 is the noise-free construction: a single scaled alpha
        let bare = t.sample_with_valuation(b2, 0).unwrap();
        let coords = t.to_alpha_basis(&bare).unwrap();
        assert_eq!(coords.iter().filter(|c| !c.is_exact_zero()).count(), 1);
        let shifted = t.sample_bare(b2, 5).unwrap();
        let v = t.k2_valuation(&shifted).unwrap();
        assert_eq!(v, 9 * 5 + t.alpha_valuation(2, 2));
    }

    #[test]
    fn valuation_agrees_with_norm_route() {
        let t = running_example();
        for (i, j) in [(0usize, 1usize), (1, 0), (1, 2), (2, 2)] {
            let a = t.alpha(i, j);
            let v2 = t.k2_valuation(a).unwrap();
            let norm = t.norm_to_k1(a).unwrap();
            assert_eq!(t.k1_valuation(&norm).unwrap(), v2);
        }
    }

    #[test]
    fn c1_d1_for_p2() {
        let p = Prime::new(2).unwrap();
        let ext = build_extension(
            p,
            ExtensionKind::Cyclic,
            &s(p, &[(-1, 1)]),
            &s(p, &[(-3, 1)]),
            None,
        )
        .unwrap();
        let t = Tower::new(ext).unwrap();
        // C1 = x1 and D1 = beta1 * x1 in characteristic 2
        assert_eq!(t.c1().unwrap().coeffs()[1], LaurentSeries::one(p));
        assert!(t.c1().unwrap().coeffs()[0].is_exact_zero());
        assert_eq!(t.d1().unwrap().coeffs()[1], s(p, &[(-1, 1)]));
    }

    #[test]
    fn one_is_neutral_and_orbit_product_is_wp() {
        let t = running_example();
        let p = p3();
        let a = t.sample_with_valuation(5, 3).unwrap();
        assert!(t.mul(&K2Element::one(p), &a).agrees_with(&a));
        // prod over k in F_p of (x2 + k) = x2^p - x2, the defining value
        let x2 = K2Element::x2(p);
        let mut prod = K2Element::one(p);
        for k in 0..3 {
            prod = t.mul(&prod, &x2.add(&K2Element::one(p).scale(k)));
        }
        assert!(prod.agrees_with(&K2Element::from_k1(p, t.wp_x2())));
    }

    #[test]
    fn p2_cyclic_example() {
        let p = Prime::new(2).unwrap();
        let ext = build_extension(
            p,
            ExtensionKind::Cyclic,
            &s(p, &[(-1, 1)]),
            &s(p, &[(-3, 1)]),
            None,
        )
        .unwrap();
        assert_eq!(ext.b2(), 5);
        assert_eq!(*ext.mu(), s(p, &[(-1, 1)]));
        let t = Tower::new(ext).unwrap();
        assert_eq!(t.k2_valuation(t.x2_adjusted()).unwrap(), -5);
    }
}
