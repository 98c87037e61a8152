use std::collections::BTreeMap;
use std::fmt;

use crate::int::Int;

/// Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Int>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn monomial(c: Int, k: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(k, &c);
        p
    }

    pub fn q_plus_q_inv() -> Self {
        LaurentPoly::monomial(Int::ONE, 1).add(&LaurentPoly::monomial(Int::ONE, -1))
    }

    pub fn add_term(&mut self, k: i64, c: &Int) {
        let e = self.terms.entry(k).or_insert(Int::ZERO);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn coefficient(&self, k: i64) -> Int {
        self.terms.get(&k).cloned().unwrap_or(Int::ZERO)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &Int)> {
        self.terms.iter()
    }

    pub fn add(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn mul(&self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> LaurentPoly {
        let mut out = LaurentPoly::monomial(Int::ONE, 0);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i == 0 {
                write!(f, "{c} q^{k}")?;
            } else if c.is_negative() {
                write!(f, " - {} q^{k}", c.abs())?;
            } else {
                write!(f, " + {c} q^{k}")?;
            }
        }
        Ok(())
    }
}
