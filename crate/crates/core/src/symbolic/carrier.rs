//! The group ring K0[G] as a truncated polynomial algebra with symbolic
//! coefficients.
//!
//! For the cyclic cases the carrier is F_p[vars][x]/(x^(p^2)) with
//! sigma1 = 1 + x and sigma2 = 1 + x^p; for the elementary abelian case it
//! is F_p[vars][y, z]/(y^p, z^p) with sigma1 = 1 + y, sigma2 = 1 + z. Both
//! are stored on the common basis (sigma2-1)^i (sigma1-1)^j, index i*p + j;
//! only the multiplication rule differs (exponent carries across the
//! p-boundary exist in the cyclic algebra and vanish in the abelian one).

use super::poly::SymPoly;
use super::SymCase;
use crate::fp::Prime;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymGroupRing {
    case: SymCase,
    coeffs: Vec<SymPoly>, // length p^2, index i*p + j for (s2-1)^i (s1-1)^j
}

impl SymGroupRing {
    pub fn zero(case: SymCase) -> Self {
        let p = case.prime();
        SymGroupRing {
            case,
            coeffs: vec![SymPoly::zero(p); (p.p() * p.p()) as usize],
        }
    }

    pub fn one(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[0] = SymPoly::one(case.prime());
        e
    }

    pub fn case(&self) -> SymCase {
        self.case
    }

    pub fn coeffs(&self) -> &[SymPoly] {
        &self.coeffs
    }

    /// (sigma1 - 1), the degree-one generator.
    pub fn aug1(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[1] = SymPoly::one(case.prime());
        e
    }

    /// (sigma2 - 1).
    pub fn aug2(case: SymCase) -> Self {
        let mut e = Self::zero(case);
        e.coeffs[case.prime().p() as usize] = SymPoly::one(case.prime());
        e
    }

    pub fn sigma1(case: SymCase) -> Self {
        Self::one(case).add(&Self::aug1(case))
    }

    pub fn sigma2(case: SymCase) -> Self {
        Self::one(case).add(&Self::aug2(case))
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
        SymGroupRing {
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
        SymGroupRing {
            case: self.case,
            coeffs,
        }
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.neg()).collect();
        SymGroupRing {
            case: self.case,
            coeffs,
        }
    }

    pub fn scale(&self, f: &SymPoly) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.mul(f)).collect();
        SymGroupRing {
            case: self.case,
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.case, other.case);
        let q = self.case.prime().p() as usize;
        let mut out = Self::zero(self.case);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in other.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let idx = if self.case.is_cyclic() {
                    // x^a * x^b with x^(p^2) = 0
                    let k = a + b;
                    if k >= q * q {
                        continue;
                    }
                    k
                } else {
                    // componentwise with y^p = z^p = 0
                    let (i, j) = (a / q, a % q);
                    let (k, l) = (b / q, b % q);
                    if i + k >= q || j + l >= q {
                        continue;
                    }
                    (i + k) * q + (j + l)
                };
                out.coeffs[idx] = out.coeffs[idx].add(&ca.mul(cb));
            }
        }
        out
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

    pub fn render(&self) -> String {
        let q = self.case.prime().p() as usize;
        let names = self.case.var_names();
        let mut parts = Vec::new();
        for (idx, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = (idx / q, idx % q);
            let mut ops = String::new();
            if i > 0 {
                ops.push_str(&format!("(s2-1)^{i}"));
            }
            if j > 0 {
                ops.push_str(&format!("(s1-1)^{j}"));
            }
            if ops.is_empty() {
                parts.push(format!("[{}]", c.render(names)));
            } else {
                parts.push(format!("[{}]*{ops}", c.render(names)));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// Truncated exponentiation sigma2^[f] = sum_{i<p} binom(f, i)(sigma2-1)^i
/// with a symbolic exponent f.
pub fn truncated_exp_sym(case: SymCase, f: &SymPoly) -> SymGroupRing {
    let p: Prime = case.prime();
    let aug2 = SymGroupRing::aug2(case);
    let mut acc = SymGroupRing::zero(case);
    let mut power = SymGroupRing::one(case);
    for i in 0..p.p() {
        if i > 0 {
            power = power.mul(&aug2);
        }
        acc = acc.add(&power.scale(&f.binomial(i)));
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frobenius_in_the_cyclic_carrier() {
        // (1 + x)^3 = 1 + x^3 exactly, i.e. sigma1^3 = sigma2
        let case = SymCase::C9;
        assert_eq!(SymGroupRing::sigma1(case).pow(3), SymGroupRing::sigma2(case));
        // and sigma1 has order 9
        assert_eq!(SymGroupRing::sigma1(case).pow(9), SymGroupRing::one(case));
    }

    #[test]
    fn abelian_augmentation_truncates() {
        let case = SymCase::C3xC3;
        assert!(SymGroupRing::aug1(case).pow(3).is_zero());
        assert!(SymGroupRing::aug2(case).pow(3).is_zero());
        assert_eq!(SymGroupRing::sigma1(case).pow(3), SymGroupRing::one(case));
    }

    #[test]
    fn truncated_exp_constant_one_is_sigma2() {
        let case = SymCase::C9;
        let one = SymPoly::one(case.prime());
        assert_eq!(truncated_exp_sym(case, &one), SymGroupRing::sigma2(case));
    }
}
