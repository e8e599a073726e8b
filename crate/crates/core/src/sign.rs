//! Signs and sign sequences with the partial order used by weak stability.

use crate::{Error, Rat, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn of(value: &Rat) -> Sign {
        if value.is_zero() {
            Sign::Zero
        } else if value > &Rat::zero() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn of_f64(value: f64) -> Sign {
        if value > 0.0 {
            Sign::Plus
        } else if value < 0.0 {
            Sign::Minus
        } else {
            Sign::Zero
        }
    }

    pub fn is_strict(self) -> bool {
        self != Sign::Zero
    }

    /// +1, 0 or -1.
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Zero => 0,
            Sign::Minus => -1,
        }
    }

    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Zero => Sign::Zero,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        };
        write!(f, "{c}")
    }
}

/// A sign per horizontal step of a path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SignSeq(pub Vec<Sign>);

impl SignSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_strict(&self) -> bool {
        self.0.iter().all(|s| s.is_strict())
    }

    /// Index of the first zero entry, if any.
    pub fn first_zero(&self) -> Option<usize> {
        self.0.iter().position(|s| *s == Sign::Zero)
    }

    pub fn require_strict(&self) -> Result<()> {
        match self.first_zero() {
            Some(entry) => Err(Error::NonStrictSign { entry: entry + 1 }),
            None => Ok(()),
        }
    }

    /// `self <= other` iff `self` arises from `other` by zeroing entries.
    pub fn leq(&self, other: &SignSeq) -> bool {
        self.len() == other.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .all(|(a, b)| *a == Sign::Zero || a == b)
    }

    pub fn parse(text: &str) -> Result<SignSeq> {
        let mut out = Vec::new();
        for c in text.chars() {
            match c {
                '+' => out.push(Sign::Plus),
                '-' => out.push(Sign::Minus),
                '0' => out.push(Sign::Zero),
                '(' | ')' | ',' | ' ' => {}
                other => return Err(Error::Parse(format!("unexpected sign character `{other}`"))),
            }
        }
        Ok(SignSeq(out))
    }
}

impl fmt::Display for SignSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leq_examples() {
        let lo = SignSeq::parse("(+,0,0,0,+)").unwrap();
        let hi = SignSeq::parse("(+,-,+,0,+)").unwrap();
        assert!(lo.leq(&hi));
        assert!(!hi.leq(&lo));
        assert!(lo.leq(&lo));
    }

    #[test]
    fn strictness() {
        let s = SignSeq::parse("(+,-,-,+)").unwrap();
        assert!(s.is_strict());
        let z = SignSeq::parse("(-,0,0)").unwrap();
        assert_eq!(z.first_zero(), Some(1));
        assert!(z.require_strict().is_err());
    }

    #[test]
    fn display_round_trip() {
        let s = SignSeq::parse("(+,-,0)").unwrap();
        assert_eq!(s.to_string(), "(+,-,0)");
    }
}
