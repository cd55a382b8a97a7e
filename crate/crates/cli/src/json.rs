//! JSON encodings of the core types.
//!
//! Rationals and integers are strings (`"p/q"`, with `/q` omitted when `q = 1`),
//! matrices are arrays of rows, and degree-2 or degree-4 classes are sparse maps
//! keyed by `"ij"` with `1 <= i < j <= 6`.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_traits::Zero;
use pindex_core::evenring::{EvenClass, FourClass, TwoClass, PAIRS};
use pindex_core::exactalg::Cubic;
use pindex_core::{Int, Mat, Rat};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("not a rational number: {0:?}")]
    Rational(String),
    #[error("not an integer: {0:?}")]
    Integer(String),
    #[error("bad class key {0:?}: expected \"ij\" with 1 <= i < j <= 6")]
    Key(String),
    #[error("ragged or empty matrix")]
    Shape,
    #[error("{0}")]
    Core(#[from] pindex_core::Error),
}

pub type ClassMap = BTreeMap<String, String>;
pub type MatrixJson = Vec<Vec<String>>;

pub fn rat_str(x: &Rat) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat, CodecError> {
    Rat::from_str(s.trim()).map_err(|_| CodecError::Rational(s.to_string()))
}

pub fn int_str(x: &Int) -> String {
    x.to_string()
}

pub fn parse_int(s: &str) -> Result<Int, CodecError> {
    Int::from_str(s.trim()).map_err(|_| CodecError::Integer(s.to_string()))
}

fn pair_key(i: usize, j: usize) -> String {
    format!("{}{}", i + 1, j + 1)
}

fn parse_key(k: &str) -> Result<(usize, usize), CodecError> {
    let digits: Vec<u32> = k.chars().filter_map(|c| c.to_digit(10)).collect();
    match digits.as_slice() {
        [i, j] if k.len() == 2 && 1 <= *i && i < j && *j <= 6 => Ok((*i as usize - 1, *j as usize - 1)),
        _ => Err(CodecError::Key(k.to_string())),
    }
}

fn coords_to_map(c: &[Rat; 15]) -> ClassMap {
    PAIRS.iter().zip(c).filter(|(_, x)| !x.is_zero()).map(|(&(i, j), x)| (pair_key(i, j), rat_str(x))).collect()
}

fn map_to_coords(m: &ClassMap) -> Result<[Rat; 15], CodecError> {
    let mut out: [Rat; 15] = Default::default();
    for (k, v) in m {
        let (i, j) = parse_key(k)?;
        out[pindex_core::evenring::pair_index(i, j)] = parse_rat(v)?;
    }
    Ok(out)
}

pub fn two_to_json(b: &TwoClass) -> ClassMap {
    coords_to_map(&b.0)
}

pub fn two_from_json(m: &ClassMap) -> Result<TwoClass, CodecError> {
    Ok(TwoClass(map_to_coords(m)?))
}

pub fn four_to_json(c: &FourClass) -> ClassMap {
    coords_to_map(&c.0)
}

pub fn four_from_json(m: &ClassMap) -> Result<FourClass, CodecError> {
    Ok(FourClass(map_to_coords(m)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenClassJson {
    pub a: String,
    #[serde(rename = "B", default)]
    pub b: ClassMap,
    #[serde(rename = "C", default)]
    pub c: ClassMap,
    pub d: String,
}

pub fn even_to_json(v: &EvenClass) -> EvenClassJson {
    EvenClassJson { a: rat_str(&v.a), b: two_to_json(&v.b), c: four_to_json(&v.c), d: rat_str(&v.d) }
}

pub fn even_from_json(j: &EvenClassJson) -> Result<EvenClass, CodecError> {
    Ok(EvenClass::new(parse_rat(&j.a)?, two_from_json(&j.b)?, four_from_json(&j.c)?, parse_rat(&j.d)?))
}

pub fn rat_matrix_to_json(m: &Mat<Rat>) -> MatrixJson {
    m.to_rows().iter().map(|r| r.iter().map(rat_str).collect()).collect()
}

pub fn int_matrix_to_json(m: &Mat<Int>) -> MatrixJson {
    m.to_rows().iter().map(|r| r.iter().map(int_str).collect()).collect()
}

pub fn rat_matrix_from_json(rows: &MatrixJson) -> Result<Mat<Rat>, CodecError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.is_empty() {
        return Err(CodecError::Shape);
    }
    Mat::from_rows(parsed).map_err(|_| CodecError::Shape)
}

pub fn int_matrix_from_json(rows: &MatrixJson) -> Result<Mat<Int>, CodecError> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if parsed.is_empty() {
        return Err(CodecError::Shape);
    }
    Mat::from_rows(parsed).map_err(|_| CodecError::Shape)
}

/// Coefficients from `t^3` down to the constant term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicJson {
    pub a3: String,
    pub a2: String,
    pub a1: String,
    pub a0: String,
}

pub fn cubic_to_json(c: &Cubic) -> CubicJson {
    CubicJson { a3: rat_str(&c.a3), a2: rat_str(&c.a2), a1: rat_str(&c.a1), a0: rat_str(&c.a0) }
}

pub fn cubic_from_json(c: &CubicJson) -> Result<Cubic, CodecError> {
    Ok(Cubic::new(parse_rat(&c.a3)?, parse_rat(&c.a2)?, parse_rat(&c.a1)?, parse_rat(&c.a0)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        let x = Rat::new(Int::from(-6), Int::from(4));
        assert_eq!(rat_str(&x), "-3/2");
        assert_eq!(parse_rat("-3/2").unwrap(), x);
        assert_eq!(rat_str(&Rat::from_integer(Int::from(5))), "5");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn keys() {
        assert_eq!(parse_key("14").unwrap(), (0, 3));
        for bad in ["41", "11", "17", "1", "123", "a2"] {
            assert!(parse_key(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn principal_is_sparse() {
        let m = two_to_json(&TwoClass::principal());
        assert_eq!(m.len(), 3);
        assert_eq!(m["14"], "-1");
        assert_eq!(two_from_json(&m).unwrap(), TwoClass::principal());
    }

    #[test]
    fn omitted_keys_are_zero() {
        let j: EvenClassJson = serde_json::from_str(r#"{"a": "1", "d": "1"}"#).unwrap();
        let v = even_from_json(&j).unwrap();
        assert_eq!(v, &EvenClass::one() + &EvenClass::omega());
    }
}
