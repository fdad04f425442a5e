use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::qseries::QSeries;
use super::special::incomplete_gamma;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, to_f64, ComplexBall};

/// Nebentypus as stored in files: `"trivial"` or explicit values χ(0..m−1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharacterData {
    Named(String),
    Values { modulus: i64, values: Vec<i64> },
}

impl CharacterData {
    pub fn is_trivial(&self) -> bool {
        match self {
            CharacterData::Named(s) => s == "trivial",
            CharacterData::Values { modulus, values } => {
                values.len() == *modulus as usize
                    && values.iter().enumerate().all(|(a, &v)| v == i64::from(crate::exactalg::gcd(a as i64, *modulus) == 1))
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            CharacterData::Named(s) if s == "trivial" => Ok(()),
            CharacterData::Named(s) => Err(Error::Parse(format!("unknown character {s:?}"))),
            CharacterData::Values { modulus, values } => {
                if *modulus < 1 || values.len() != *modulus as usize {
                    return Err(Error::Parse("character needs one value per residue".into()));
                }
                if values.iter().any(|v| v.abs() > 1) {
                    return Err(Error::Parse("only real (quadratic or trivial) characters are supported".into()));
                }
                Ok(())
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct NewformFile {
    level: i64,
    weight: i64,
    character: CharacterData,
    fricke_sign: Option<i8>,
    coefficients: Vec<String>,
    constant_term: String,
}

/// A form with its q-expansion at ∞ and the data needed for Λ(s, f).
#[derive(Clone, Debug, PartialEq)]
pub struct NewformData {
    pub level: i64,
    pub weight: i64,
    pub character: CharacterData,
    pub fricke_sign: Option<i8>,
    pub q: QSeries,
}

impl NewformData {
    pub fn new(level: i64, weight: i64, fricke_sign: Option<i8>, q: QSeries) -> Result<Self> {
        let f = NewformData { level, weight, character: CharacterData::Named("trivial".into()), fricke_sign, q };
        f.validate()?;
        Ok(f)
    }

    fn validate(&self) -> Result<()> {
        if self.level < 1 || self.weight < 1 {
            return Err(Error::Invalid("level and weight must be positive".into()));
        }
        if let Some(e) = self.fricke_sign {
            if e != 1 && e != -1 {
                return Err(Error::Invalid(format!("Fricke sign must be +1 or -1, got {e}")));
            }
        }
        self.character.validate()
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: NewformFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let coeffs = file.coefficients.iter().map(|c| parse_rational(c)).collect::<Result<Vec<_>>>()?;
        let q = QSeries::new(parse_rational(&file.constant_term)?, coeffs)?;
        let f = NewformData { level: file.level, weight: file.weight, character: file.character, fricke_sign: file.fricke_sign, q };
        f.validate()?;
        Ok(f)
    }

    pub fn to_json_string(&self) -> String {
        let file = NewformFile {
            level: self.level,
            weight: self.weight,
            character: self.character.clone(),
            fricke_sign: self.fricke_sign,
            coefficients: self.q.coeffs().iter().map(format_rational).collect(),
            constant_term: format_rational(&self.q.a0),
        };
        serde_json::to_string_pretty(&file).expect("plain data serializes") + "\n"
    }

    pub fn is_normalized(&self) -> bool {
        self.q.coeff(1).is_some_and(|a| *a == num_traits::One::one())
    }
}

/// Λ(s, f) with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct LValue {
    pub s: i64,
    pub level: i64,
    pub weight: i64,
    pub terms: usize,
    pub value: ComplexBall,
}

impl LValue {
    pub fn error(&self) -> f64 {
        self.value.err
    }
}

/// |a_m| ≤ d(m) m^{(k−1)/2} ≤ 2 m^{k/2}.
fn coeff_bound(m: f64, k: i64) -> f64 {
    2.0 * m.powf(k as f64 / 2.0)
}

/// Σ_{m>terms} bound(m)·(2πm)^{−e}Γ(e, 2πm/√N · scale), summed until the
/// remaining geometric tail is negligible.
fn tail_bound(terms: usize, k: i64, e: i64, x_per_m: f64) -> f64 {
    let mut acc = 0.0;
    let mut m = terms + 1;
    let ratio = (-x_per_m).exp();
    loop {
        let mf = m as f64;
        let t = coeff_bound(mf, k) * (2.0 * PI * mf).powi(-e as i32) * incomplete_gamma(e as u32, x_per_m * mf);
        acc += t;
        if t <= 1e-40 || t < acc * 1e-20 {
            // remaining terms shrink at least like ratio·(1+1/m)^{k/2+e}
            let growth = (1.0 + 1.0 / mf).powf(k as f64 / 2.0 + e as f64 + 1.0);
            let r = ratio * growth;
            if r < 1.0 {
                return acc + t * r / (1.0 - r);
            }
        }
        m += 1;
        if m > terms + 100_000 {
            return f64::INFINITY;
        }
    }
}

/// The two incomplete-gamma sums with split point y₀ = scale/√N.
fn lambda_split(f: &NewformData, s: i64, terms: usize, scale: f64) -> Result<ComplexBall> {
    let k = f.weight;
    let eps = f.fricke_sign.ok_or_else(|| Error::Invalid("Fricke sign missing".into()))?;
    if s <= 0 || s >= k {
        return Err(Error::Invalid(format!("need 0 < s < k, got s = {s}, k = {k}")));
    }
    if !f.q.is_cuspidal() {
        return Err(Error::Invalid("completed L-values are computed for cusp forms".into()));
    }
    if terms == 0 || terms > f.q.order() {
        return Err(Error::Invalid(format!("requested {terms} terms, {} available", f.q.order())));
    }
    let sqrt_n = (f.level as f64).sqrt();
    let x1 = 2.0 * PI * scale / sqrt_n;
    let x2 = 2.0 * PI / (scale * sqrt_n);
    let mut first = 0.0;
    let mut second = 0.0;
    let mut mag = 0.0;
    for (i, a) in f.q.coeffs()[..terms].iter().enumerate() {
        let a = to_f64(a);
        if a == 0.0 {
            continue;
        }
        let m = (i + 1) as f64;
        let t1 = a * (2.0 * PI * m).powi(-s as i32) * incomplete_gamma(s as u32, x1 * m);
        let t2 = a * (2.0 * PI * m).powi((s - k) as i32) * incomplete_gamma((k - s) as u32, x2 * m);
        first += t1;
        second += t2;
        mag += t1.abs() + t2.abs();
    }
    let factor = eps as f64 * (f.level as f64).powf(k as f64 / 2.0 - s as f64);
    let tail = tail_bound(terms, k, s, x1) + factor.abs() * tail_bound(terms, k, k - s, x2);
    let rounding = 64.0 * f64::EPSILON * mag * (1.0 + factor.abs());
    // i^k ε N^{k/2−s} times the second sum
    let ik = ComplexBall::i_pow(k);
    let value = ComplexBall::real(first).add(&ik.scale(factor * second));
    Ok(ComplexBall::new(value.re, value.im, tail + rounding))
}

/// Λ(s, f) = (2π)^{−s}Γ(s)L(s, f) from the first `terms` coefficients.
pub fn completed_lvalue(f: &NewformData, s: i64, terms: usize) -> Result<LValue> {
    Ok(LValue { s, level: f.level, weight: f.weight, terms, value: lambda_split(f, s, terms, 1.0)? })
}

/// Λ(s, f) for every 0 < s < k, evaluated concurrently.
pub fn completed_lvalues(f: &NewformData, terms: usize) -> Result<Vec<LValue>> {
    (1..f.weight).into_par_iter().map(|s| completed_lvalue(f, s, terms)).collect()
}

/// Largest change of Λ(s) over 0 < s < k when the split point moves off
/// 1/√N. The formula is split-independent exactly when the Fricke sign is right.
pub fn fricke_split_defect(f: &NewformData, terms: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for s in 1..f.weight {
        let a = lambda_split(f, s, terms, 1.0)?;
        let b = lambda_split(f, s, terms, 1.25)?;
        worst = worst.max(a.dist(&b));
    }
    Ok(worst)
}
