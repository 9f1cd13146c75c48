use std::fmt;

use serde::Serialize;

use super::poly::SparsePolynomial;

/// `sign * prod(factor^multiplicity)`, kept unexpanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredPolynomial {
    sign: i8,
    factors: Vec<(SparsePolynomial, u32)>,
}

impl FactoredPolynomial {
    pub fn one() -> Self {
        FactoredPolynomial {
            sign: 1,
            factors: Vec::new(),
        }
    }

    /// Each factor with multiplicity one, in the given order. Constant `1`
    /// factors are dropped.
    pub fn from_factors(factors: impl IntoIterator<Item = SparsePolynomial>) -> Self {
        let mut fp = FactoredPolynomial::one();
        for f in factors {
            fp.push(f, 1);
        }
        fp
    }

    pub fn push(&mut self, factor: SparsePolynomial, multiplicity: u32) {
        if multiplicity == 0 || factor.is_one() {
            return;
        }
        if let Some(s) = factor.unit_sign() {
            if multiplicity % 2 == 1 {
                self.sign *= s;
            }
            return;
        }
        self.factors.push((factor, multiplicity));
    }

    /// Append every factor of `other` and multiply in its sign.
    pub fn extend(&mut self, other: &FactoredPolynomial) {
        self.sign *= other.sign;
        for (f, m) in &other.factors {
            self.push(f.clone(), *m);
        }
    }

    pub fn negate(&mut self) {
        self.sign = -self.sign;
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn factors(&self) -> &[(SparsePolynomial, u32)] {
        &self.factors
    }

    /// Factors with multiplicity expanded, e.g. `f^2` listed twice.
    pub fn factor_list(&self) -> Vec<&SparsePolynomial> {
        self.factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f, *m as usize))
            .collect()
    }

    pub fn expand(&self) -> SparsePolynomial {
        let mut acc = SparsePolynomial::constant(self.sign as i64);
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    pub fn degree(&self) -> u32 {
        self.factors
            .iter()
            .map(|(f, m)| f.degree().unwrap_or(0) * m)
            .sum()
    }

    /// No factor repeats, even up to sign.
    pub fn is_square_free(&self) -> bool {
        let mut seen: Vec<SparsePolynomial> = Vec::new();
        for f in self.factor_list() {
            let key = f.normalized();
            if seen.contains(&key) {
                return false;
            }
            seen.push(key);
        }
        true
    }

    /// Factors joined by `*`, with multi-term factors in parentheses.
    pub fn render(&self, sep: &str) -> String {
        let mut parts: Vec<String> = Vec::new();
        for f in self.factor_list() {
            if f.term_count() > 1 {
                parts.push(format!("({f})"));
            } else {
                parts.push(f.to_string());
            }
        }
        let body = if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join(sep)
        };
        if self.sign < 0 {
            format!("-{body}")
        } else {
            body
        }
    }

    pub fn to_json(&self) -> FactoredJson {
        FactoredJson {
            sign: self.sign,
            factors: self
                .factors
                .iter()
                .map(|(f, m)| FactorJson {
                    factor: f.to_string(),
                    multiplicity: *m,
                })
                .collect(),
            text: self.to_string(),
        }
    }
}

impl fmt::Display for FactoredPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("*"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorJson {
    pub factor: String,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct FactoredJson {
    pub sign: i8,
    pub factors: Vec<FactorJson>,
    pub text: String,
}
