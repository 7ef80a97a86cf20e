//! The field K2 as a symbolic object: a rank-p^2 algebra over the
//! polynomial coefficient ring with basis x1^a X2^b (0 <= a, b < p),
//! reduction rules x1^p = x1 + beta1 and X2^p = X2 + wp(X2), and the Galois
//! action of the case.
//!
//! The wp(X2) expression is where the inert constant (k, or eps for the
//! quartic case) enters; certifying that it cancels out of every identity is
//! part of the point of the consistency checks.

use super::poly::SymPoly;
use super::SymCase;


#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymK2 {
    case: SymCase,
    coeffs: Vec<SymPoly>, // index a*p + b for x1^a X2^b
}

impl SymK2 {
    pub fn zero(case: SymCase) -> Self {
        let p = case.prime();
        SymK2 {
            case,
            coeffs: vec![SymPoly::zero(p); (p.p() * p.p()) as usize],
        }
    }

    pub fn one(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[0] = SymPoly::one(case.prime());
        e
    }

    pub fn x1(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[case.prime().p() as usize] = SymPoly::one(case.prime());
        e
    }

    pub fn x2_big(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[1] = SymPoly::one(case.prime());
        e
    }

    pub fn scalar(case: SymCase, f: &SymPoly) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[0] = f.clone();
        e
    }

    pub fn case(&self) -> SymCase {
        self.case
    }

    pub fn coeffs(&self) -> &[SymPoly] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.case, other.case);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        SymK2 {
            case: self.case,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.case, other.case);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.sub(b))
            .collect();
        SymK2 {
            case: self.case,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        SymK2 {
            case: self.case,
            coeffs,
        }
    }

    pub fn scale(&self, f: &SymPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.mul(f)).collect();
        SymK2 {
            case: self.case,
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.case, other.case);
        let p = self.case.prime();
        let q = p.p() as usize;
        let width = 2 * q - 1;
        let mut buf = vec![SymPoly::zero(p); width * width];
        for (ia, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let (a1, a2) = (ia / q, ia % q);
            for (ib, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let (b1, b2) = (ib / q, ib % q);
                let idx = (a1 + b1) * width + (a2 + b2);
                buf[idx] = buf[idx].add(&ca.mul(cb));
            }
        }
        self.fold(&mut buf, width);
        let mut out = Self::zero(self.case);
        for a in 0..q {
            for b in 0..q {
                out.coeffs[a * q + b] = std::mem::replace(
                    &mut buf[a * width + b],
                    SymPoly::zero(p),
                );
            }
        }
        out
    }

    /// Reduce a (2p-1) x (2p-1) buffer (x1-degree major) to degrees < p.
    fn fold(&self, buf: &mut [SymPoly], width: usize) {
        let p = self.case.prime();
        let q = p.p() as usize;
        let beta1 = self.case.beta1_var();
        // x1^a = x1^(a-p) (x1 + beta1)
        let fold_x1 = |buf: &mut [SymPoly]| {
            for a in (q..width).rev() {
                for b in 0..width {
                    let c = std::mem::replace(&mut buf[a * width + b], SymPoly::zero(p));
                    if c.is_zero() {
                        continue;
                    }
                    let lo = (a - q) * width + b;
                    buf[lo + width] = buf[lo + width].add(&c);
                    buf[lo] = buf[lo].add(&c.mul(&beta1));
                }
            }
        };
        fold_x1(buf);
        // X2^b = X2^(b-p) (X2 + wp(X2)); wp(X2) has x1-degree < p
        let w = self.case.wp_x2_coeffs();
        for b in (q..width).rev() {
            for a in 0..q {
                let c = std::mem::replace(&mut buf[a * width + b], SymPoly::zero(p));
                if c.is_zero() {
                    continue;
                }
                buf[a * width + (b - q + 1)] = buf[a * width + (b - q + 1)].add(&c);
                for (d, wc) in w.iter().enumerate() {
                    if wc.is_zero() {
                        continue;
                    }
                    let idx = (a + d) * width + (b - q);
                    buf[idx] = buf[idx].add(&c.mul(wc));
                }
            }
        }
        fold_x1(buf);
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::one(self.case);
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

    /// binom(v, i) = v(v-1)...(v-i+1)/i! for i < p.
    pub fn binomial(&self, i: u32) -> Self {
        let p = self.case.prime();
        assert!(i < p.p());
        let mut acc = Self::one(self.case);
        let mut fact = 1u64;
        for k in 0..i {
            let shifted = self.sub(&Self::scalar(self.case, &SymPoly::constant(p, k as i64)));
            acc = acc.mul(&shifted);
            fact *= (k + 1) as u64;
        }
        acc.scale(&SymPoly::constant(p, p.inv_int(fact) as i64))
    }

    /// alpha_{i,j} = binom(X2, i) * binom(x1, j).
    pub fn alpha(case: SymCase, i: u32, j: u32) -> Self {
        Self::x2_big(case)
            .binomial(i)
            .mul(&Self::x1(case).binomial(j))
    }

    /// Ring substitution x1 -> x1 + im_x1, X2 -> X2 + im_x2 (the images of
    /// the generators minus the generators, both of X2-degree 0 or constant).
    fn substitute(&self, delta_x1: &SymK2, delta_x2: &SymK2) -> Self {
        let q = self.case.prime().p() as usize;
        let new_x1 = Self::x1(self.case).add(delta_x1);
        let new_x2 = Self::x2_big(self.case).add(delta_x2);
        let mut pow1 = Vec::with_capacity(q);
        let mut pow2 = Vec::with_capacity(q);
        let mut acc = Self::one(self.case);
        for _ in 0..q {
            pow1.push(acc.clone());
            acc = acc.mul(&new_x1);
        }
        acc = Self::one(self.case);
        for _ in 0..q {
            pow2.push(acc.clone());
            acc = acc.mul(&new_x2);
        }
        let mut out = Self::zero(self.case);
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = (idx / q, idx % q);
            out = out.add(&pow1[a].mul(&pow2[b]).scale(c));
        }
        out
    }

    /// The automorphism sigma1 of the case.
    pub fn sigma1(&self) -> Self {
        let one = Self::one(self.case);
        self.substitute(&one, &self.case.sigma1_shift_x2())
    }

    /// The automorphism sigma2: fixes x1 and shifts X2 by 1.
    pub fn sigma2(&self) -> Self {
        let zero = Self::zero(self.case);
        self.substitute(&zero, &Self::one(self.case))
    }

    /// Apply (sigma2 - 1)^i (sigma1 - 1)^j.
    pub fn aug_powers(&self, i: u32, j: u32) -> Self {
        let mut v = self.clone();
        for _ in 0..j {
            v = v.sigma1().sub(&v);
        }
        for _ in 0..i {
            v = v.sigma2().sub(&v);
        }
        v
    }

    /// Substitute zero for a coefficient variable throughout.
    pub fn subst_zero(&self, idx: usize) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.subst_zero(idx)).collect();
        SymK2 {
            case: self.case,
            coeffs,
        }
    }

    pub fn render(&self) -> String {
        let q = self.case.prime().p() as usize;
        let names = self.case.var_names();
        let mut parts = Vec::new();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (a, b) = (idx / q, idx % q);
            let mut mono = String::new();
            if a > 0 {
                mono.push_str(&format!("x1^{a}"));
            }
            if b > 0 {
                mono.push_str(&format!("X2^{b}"));
            }
            if mono.is_empty() {
                parts.push(format!("[{}]", c.render(names)));
            } else {
                parts.push(format!("[{}]*{mono}", c.render(names)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Action of a group-ring element on the module through the operator
/// expansion in (sigma2-1)^i (sigma1-1)^j; valid for both kinds because
/// (sigma1-1)^p acts exactly as (sigma2-1) in the cyclic cases.
pub fn apply_group_ring(theta: &super::carrier::SymGroupRing, v: &SymK2) -> SymK2 {
    assert_eq!(theta.case(), v.case());
    let q = v.case().prime().p() as usize;
    let mut acc = SymK2::zero(v.case());
    // u[i][j] = (s2-1)^i (s1-1)^j v, built incrementally
    let mut row = v.clone();
    for i in 0..q {
        if i > 0 {
            row = row.sigma2().sub(&row);
        }
        let mut cur = row.clone();
        for j in 0..q {
            if j > 0 {
                cur = cur.sigma1().sub(&cur);
            }
            let c = &theta.coeffs()[i * q + j];
            if !c.is_zero() {
                acc = acc.add(&cur.scale(c));
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x1_cube_reduces() {
        let case = SymCase::C9;
        let x1 = SymK2::x1(case);
        let cube = x1.pow(3);
        let expected = x1.add(&SymK2::scalar(case, &case.beta1_var()));
        assert_eq!(cube, expected);
    }

    #[test]
    fn x2_cube_reduces_through_wp() {
        let case = SymCase::C3xC3;
        let x2 = SymK2::x2_big(case);
        let cube = x2.pow(3);
        let mut w = SymK2::zero(case);
        for (d, c) in case.wp_x2_coeffs().iter().enumerate() {
            let mut m = SymK2::zero(case);
            m.coeffs[d * 3] = c.clone();
            w = w.add(&m);
        }
        assert_eq!(cube, x2.add(&w));
    }

    #[test]
    fn sigma2_shifts_x2_only() {
        for case in [SymCase::C4, SymCase::C9, SymCase::C3xC3] {
            let x2 = SymK2::x2_big(case);
            assert_eq!(x2.sigma2(), x2.add(&SymK2::one(case)));
            let x1 = SymK2::x1(case);
            assert_eq!(x1.sigma2(), x1);
        }
    }
}
