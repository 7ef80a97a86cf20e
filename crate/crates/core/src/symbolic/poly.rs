//! Multivariate polynomials over F_p in a fixed small set of indeterminates.
//!
//! The identity certifications only ever involve at most four variables and
//! small total degrees, so a plain ordered map from exponent vectors to
//! nonzero scalars is enough.

use std::collections::BTreeMap;
use std::fmt;

use crate::fp::Prime;

pub const NVARS: usize = 4;
pub type Mono = [u8; NVARS];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    p: Prime,
    terms: BTreeMap<Mono, u32>,
}

impl SymPoly {
    pub fn zero(p: Prime) -> Self {
        SymPoly {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(p: Prime, c: i64) -> Self {
        let mut terms = BTreeMap::new();
        let c = p.reduce(c);
        if c != 0 {
            terms.insert([0; NVARS], c);
        }
        SymPoly { p, terms }
    }

    pub fn one(p: Prime) -> Self {
        Self::constant(p, 1)
    }

    pub fn var(p: Prime, idx: usize) -> Self {
        let mut mono = [0u8; NVARS];
        mono[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(mono, 1);
        SymPoly { p, terms }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (&m, &c) in &other.terms {
            let v = self.p.add(*terms.get(&m).unwrap_or(&0), c);
            if v == 0 {
                terms.remove(&m);
            } else {
                terms.insert(m, v);
            }
        }
        SymPoly { p: self.p, terms }
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(&m, &c)| (m, self.p.neg(c)))
            .collect();
        SymPoly { p: self.p, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: i64) -> Self {
        let c = self.p.reduce(c);
        if c == 0 {
            return Self::zero(self.p);
        }
        let terms = self
            .terms
            .iter()
            .map(|(&m, &k)| (m, self.p.mul(k, c)))
            .collect();
        SymPoly { p: self.p, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Mono, u32> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mut m = [0u8; NVARS];
                for k in 0..NVARS {
                    m[k] = ma[k]
                        .checked_add(mb[k])
                        .expect("monomial degree overflow");
                }
                let v = self.p.add(*terms.get(&m).unwrap_or(&0), self.p.mul(ca, cb));
                if v == 0 {
                    terms.remove(&m);
                } else {
                    terms.insert(m, v);
                }
            }
        }
        SymPoly { p: self.p, terms }
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

    /// binom(f, i) = f(f-1)...(f-i+1)/i! for i < p.
    pub fn binomial(&self, i: u32) -> Self {
        assert!(i < self.p.p(), "binom needs i < p");
        let mut acc = Self::one(self.p);
        let mut fact = 1u64;
        for k in 0..i {
            acc = acc.mul(&self.sub(&Self::constant(self.p, k as i64)));
            fact *= (k + 1) as u64;
        }
        acc.scale(self.p.inv_int(fact) as i64)
    }

    /// Substitute zero for one variable.
    pub fn subst_zero(&self, idx: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m[idx] == 0)
            .map(|(&m, &c)| (m, c))
            .collect();
        SymPoly { p: self.p, terms }
    }

    /// Evaluate by substituting a scalar for every variable (test helper).
    pub fn eval(&self, values: &[u32; NVARS]) -> u32 {
        let mut acc = 0u32;
        for (m, &c) in &self.terms {
            let mut term = c;
            for k in 0..NVARS {
                term = self.p.mul(term, self.p.pow(values[k], m[k] as u32));
            }
            acc = self.p.add(acc, term);
        }
        acc
    }

    pub fn render(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, &c) in &self.terms {
            let mut factors = Vec::new();
            if c != 1 || m.iter().all(|&e| e == 0) {
                factors.push(c.to_string());
            }
            for k in 0..NVARS {
                match m[k] {
                    0 => {}
                    1 => factors.push(names[k].to_string()),
                    e => factors.push(format!("{}^{e}", names[k])),
                }
            }
            parts.push(factors.join("*"));
        }
        parts.join(" + ")
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&["a", "b", "c", "d"]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_binomials() {
        let p = Prime::new(3).unwrap();
        let x = SymPoly::var(p, 0);
        // binom(x, 2) = (x^2 - x)/2 = 2x^2 + x mod 3
        let b = x.binomial(2);
        let expected = x.pow(2).scale(2).add(&x);
        assert_eq!(b, expected);
        // Frobenius: (x + 1)^3 = x^3 + 1
        let lhs = x.add(&SymPoly::one(p)).pow(3);
        let rhs = x.pow(3).add(&SymPoly::one(p));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_kills_variables() {
        let p = Prime::new(3).unwrap();
        let x = SymPoly::var(p, 0);
        let y = SymPoly::var(p, 1);
        let f = x.mul(&y).add(&x).add(&SymPoly::one(p));
        let g = f.subst_zero(1);
        assert_eq!(g, x.add(&SymPoly::one(p)));
    }
}
