use std::fmt;
use std::ops::{Add, Index, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{format_rational, int, parse_rational_at, Rational};
use crate::error::{Error, Result};

/// A column vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    entries: Vec<Rational>,
}

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[axis] = int(1);
        v
    }

    /// Parses a comma-separated list of rationals, e.g. `"1,-1/2,0"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut offset = 0;
        for piece in text.split(',') {
            entries.push(parse_rational_at(piece, offset)?);
            offset += piece.len() + 1;
        }
        Ok(Self::new(entries))
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn scale(&self, factor: &Rational) -> Vector {
        Vector::new(self.entries.iter().map(|e| e * factor).collect())
    }

    pub fn max_abs(&self) -> Rational {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected,
                found: self.dim(),
            })
        }
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &Vector) -> Vector {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Vector::new(entries)
    }

    pub fn split_at(&self, mid: usize) -> (Vector, Vector) {
        let (a, b) = self.entries.split_at(mid);
        (Vector::new(a.to_vec()), Vector::new(b.to_vec()))
    }

    /// Arithmetic mean of a nonempty list of points.
    pub fn mean(points: &[Vector]) -> Vector {
        assert!(!points.is_empty(), "mean of an empty point set");
        let sum = points[1..]
            .iter()
            .fold(points[0].clone(), |acc, p| &acc + p);
        sum.scale(&Rational::new(1.into(), (points.len() as i64).into()))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(super::rational::to_f64).collect()
    }
}

impl Index<usize> for Vector {
    type Output = Rational;

    fn index(&self, index: usize) -> &Rational {
        &self.entries[index]
    }
}

impl Add for &Vector {
    type Output = Vector;

    fn add(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Vector {
    type Output = Vector;

    fn sub(self, rhs: &Vector) -> Vector {
        debug_assert_eq!(self.dim(), rhs.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &Vector {
    type Output = Vector;

    fn neg(self) -> Vector {
        Vector::new(self.entries.iter().map(|e| -e).collect())
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<String> = self.entries.iter().map(format_rational).collect();
        parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<RationalText>::deserialize(deserializer)?;
        let mut entries = Vec::with_capacity(parts.len());
        for part in parts {
            let text = match part {
                RationalText::Text(s) => s,
                RationalText::Int(i) => i.to_string(),
            };
            entries.push(super::rational::parse_rational(&text).map_err(serde::de::Error::custom)?);
        }
        Ok(Vector::new(entries))
    }
}

/// File formats carry rationals as strings; bare JSON integers are accepted too.
#[derive(Deserialize)]
#[serde(untagged)]
enum RationalText {
    Text(String),
    Int(i64),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::frac;

    #[test]
    fn parse_and_display() {
        let v = Vector::parse("1,-1/2,0").unwrap();
        assert_eq!(v.entries(), &[int(1), frac(-1, 2), int(0)]);
        assert_eq!(v.to_string(), "1,-1/2,0");
        match Vector::parse("1,2/0") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arithmetic() {
        let a = Vector::from_ints(&[1, 2, 3]);
        let b = Vector::from_ints(&[-1, 0, 1]);
        assert_eq!(a.dot(&b), int(2));
        assert_eq!(&a + &b, Vector::from_ints(&[0, 2, 4]));
        assert_eq!(&a - &b, Vector::from_ints(&[2, 2, 2]));
        assert_eq!(-&b, Vector::from_ints(&[1, 0, -1]));
        assert_eq!(
            Vector::mean(&[a.clone(), b.clone()]),
            Vector::new(vec![int(0), int(1), int(2)])
        );
        assert!(Vector::zeros(3).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let v = Vector::new(vec![frac(-3, 7), int(2)]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["-3/7","2"]"#);
        assert_eq!(serde_json::from_str::<Vector>(&text).unwrap(), v);
        assert_eq!(
            serde_json::from_str::<Vector>("[1, \"1/2\"]").unwrap(),
            Vector::new(vec![int(1), frac(1, 2)])
        );
    }
}
