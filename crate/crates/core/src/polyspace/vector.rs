use serde_json::{json, Map, Value};
use std::sync::Arc;

use super::poly::PolyValue;
use crate::cosets::{CosetSpace, GroupKind, Mat2};
use crate::error::{Error, Result};
use crate::exactalg::{parse_rational, Field, Rational, Scalar, ScalarField};

/// s^w for a recorded sign s.
pub(crate) fn sign_pow(s: i8, w: usize) -> Rational {
    if s < 0 && w % 2 == 1 {
        Rational::from_integer((-1).into())
    } else {
        Rational::from_integer(1.into())
    }
}

pub(crate) fn join_fields<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> Result<ScalarField> {
    let mut f = ScalarField::Rational;
    for x in xs {
        f = f.join(&x.field()).ok_or_else(|| Error::FieldMismatch(format!("{} does not combine with {}", x, f)))?;
    }
    Ok(f)
}

/// One polynomial of degree ≤ w per coset label, stored flat: entry
/// `label·(w+1) + i` is the coefficient of Xⁱ in P(lift of label).
#[derive(Clone, Debug)]
pub struct PolyVector {
    space: Arc<CosetSpace>,
    field: ScalarField,
    coeffs: Vec<Scalar>,
}

impl PartialEq for PolyVector {
    fn eq(&self, o: &Self) -> bool {
        same_space(&self.space, &o.space) && self.coeffs == o.coeffs
    }
}

pub(crate) fn same_space(a: &CosetSpace, b: &CosetSpace) -> bool {
    a.kind() == b.kind() && a.level() == b.level() && a.weight() == b.weight()
}

impl PolyVector {
    pub fn zero(space: &Arc<CosetSpace>, field: &ScalarField) -> Self {
        let len = space.index() * (space.w() + 1);
        PolyVector { space: space.clone(), field: field.clone(), coeffs: vec![field.zero(); len] }
    }

    /// From the flat coefficient list; the field is the join of the entries.
    pub fn from_flat(space: &Arc<CosetSpace>, coeffs: Vec<Scalar>) -> Result<Self> {
        let len = space.index() * (space.w() + 1);
        if coeffs.len() != len {
            return Err(Error::Dimension(format!("expected {} coefficients, got {}", len, coeffs.len())));
        }
        let field = join_fields(&coeffs)?;
        let coeffs = coeffs.iter().map(|x| x.coerce(&field)).collect();
        Ok(PolyVector { space: space.clone(), field, coeffs })
    }

    pub fn from_values(space: &Arc<CosetSpace>, values: &[PolyValue]) -> Result<Self> {
        if values.len() != space.index() {
            return Err(Error::Dimension(format!("expected {} values, got {}", space.index(), values.len())));
        }
        if let Some(v) = values.iter().find(|v| v.0.len() != space.w() + 1) {
            return Err(Error::Dimension(format!("polynomial of length {} for w = {}", v.0.len(), space.w())));
        }
        Self::from_flat(space, values.iter().flat_map(|v| v.0.iter().cloned()).collect())
    }

    pub fn space(&self) -> &Arc<CosetSpace> {
        &self.space
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn w(&self) -> usize {
        self.space.w()
    }

    pub fn flat(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_flat(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn value(&self, label: usize) -> PolyValue {
        let m = self.w() + 1;
        PolyValue(self.coeffs[label * m..(label + 1) * m].to_vec())
    }

    /// P at the coset of an arbitrary matrix A ∈ SL₂(ℤ), sign included.
    pub fn value_at(&self, a: &Mat2) -> Result<PolyValue> {
        let (l, s) = self.space.label_of(a)?;
        let v = self.value(l);
        Ok(PolyValue(v.0.iter().map(|x| x.fscale(&sign_pow(s, self.w()))).collect()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| x.is_zero_elt())
    }

    fn zip(&self, o: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if !same_space(&self.space, &o.space) {
            return Err(Error::Invalid("polynomial vectors live on different coset spaces".into()));
        }
        let coeffs: Vec<Scalar> = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| f(a, b)).collect();
        Self::from_flat(&self.space, coeffs)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.fadd(b))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.zip(o, |a, b| a.fsub(b))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let coeffs: Vec<Scalar> = self.coeffs.iter().map(|x| x.fmul(s)).collect();
        Self::from_flat(&self.space, coeffs).expect("scaling keeps the length")
    }

    pub fn conj(&self) -> Self {
        PolyVector { space: self.space.clone(), field: self.field.clone(), coeffs: self.coeffs.iter().map(|x| x.conj()).collect() }
    }

    /// P|g for g ∈ SL₂(ℤ), or g = ε.
    pub fn slash(&self, g: &Mat2) -> Result<Self> {
        let op = super::ops::LinOp::slash(&self.space, g)?;
        Self::from_flat(&self.space, op.apply(&self.coeffs))
    }

    /// P|ε.
    pub fn eps(&self) -> Self {
        self.slash(&Mat2::EPS).expect("ε is handled")
    }

    /// P(−A) = (−1)^w P(A) read through the J-table.
    pub fn j_parity_holds(&self) -> bool {
        let w = self.w();
        (0..self.space.index()).all(|l| {
            let (l2, s) = self.space.tables().j[l];
            let a = self.value(l2);
            let b = self.value(l);
            // P(A·J) = s^w·stored(l2) must equal (−1)^w·stored(l)
            let par = if w % 2 == 1 { Rational::from_integer((-1).into()) } else { Rational::from_integer(1.into()) };
            a.0.iter().zip(&b.0).all(|(x, y)| x.fscale(&sign_pow(s, w)) == y.fscale(&par))
        })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.space.kind().to_string(),
            "level": self.space.level(),
            "weight": self.space.weight(),
            "values": values_json(&self.space, &self.coeffs, self.w() + 1),
        })
    }

    pub fn from_json(space: &Arc<CosetSpace>, v: &Value) -> Result<Self> {
        check_header(space, v)?;
        let values = v.get("values").ok_or_else(|| Error::Parse("missing \"values\"".into()))?;
        let flat = parse_values(space, values, space.w() + 1)?;
        Self::from_flat(space, flat)
    }
}

fn values_json(space: &CosetSpace, flat: &[Scalar], m: usize) -> Value {
    let mut map = Map::new();
    for l in 0..space.index() {
        let arr: Vec<Value> = flat[l * m..(l + 1) * m].iter().map(|x| Value::String(x.to_string())).collect();
        map.insert(space.label_name(l), Value::Array(arr));
    }
    Value::Object(map)
}

fn parse_values(space: &CosetSpace, v: &Value, m: usize) -> Result<Vec<Scalar>> {
    let map = v.as_object().ok_or_else(|| Error::Parse("values must be a map from coset label".into()))?;
    let mut flat: Vec<Option<Scalar>> = vec![None; space.index() * m];
    for (k, arr) in map {
        let l = space.parse_label(k)?;
        let arr = arr.as_array().ok_or_else(|| Error::Parse(format!("entry {k} must be an array")))?;
        if arr.len() != m {
            return Err(Error::Parse(format!("entry {k} has {} coefficients, expected {m}", arr.len())));
        }
        for (i, x) in arr.iter().enumerate() {
            let s = x.as_str().ok_or_else(|| Error::Parse(format!("coefficient in {k} must be a \"p/q\" string")))?;
            flat[l * m + i] = Some(Scalar::from(parse_rational(s)?));
        }
    }
    flat.into_iter()
        .enumerate()
        .map(|(i, x)| x.ok_or_else(|| Error::Parse(format!("missing coset {}", space.label_name(i / m)))))
        .collect()
}

fn check_header(space: &CosetSpace, v: &Value) -> Result<()> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing {k:?}")));
    let kind: GroupKind = get("group")?.as_str().ok_or_else(|| Error::Parse("group must be a string".into()))?.parse()?;
    let level = get("level")?.as_i64().ok_or_else(|| Error::Parse("level must be an integer".into()))?;
    let weight = get("weight")?.as_i64().ok_or_else(|| Error::Parse("weight must be an integer".into()))?;
    if (kind, level, weight) != (space.kind(), space.level(), space.weight()) {
        return Err(Error::Invalid(format!(
            "file is for {kind}({level}) weight {weight}, space is {}({}) weight {}",
            space.kind(),
            space.level(),
            space.weight()
        )));
    }
    Ok(())
}

/// A polynomial vector P together with cusp constants c_A, standing for
/// P̃ = P + P⁰|(1−S) with P⁰(A) = c_A X^{w+1}.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtPolyVector {
    pub poly: PolyVector,
    pub tails: Vec<Scalar>,
}

impl ExtPolyVector {
    pub fn new(poly: PolyVector, tails: Vec<Scalar>) -> Result<Self> {
        if tails.len() != poly.space.index() {
            return Err(Error::Dimension(format!("expected {} cusp constants, got {}", poly.space.index(), tails.len())));
        }
        let field = join_fields(poly.flat().iter().chain(&tails))?;
        let poly = PolyVector::from_flat(&poly.space, poly.coeffs.iter().map(|x| x.coerce(&field)).collect())?;
        let tails = tails.iter().map(|x| x.coerce(&field)).collect();
        Ok(ExtPolyVector { poly, tails })
    }

    /// Zero tails.
    pub fn from_poly(poly: PolyVector) -> Self {
        let tails = vec![poly.field.zero(); poly.space.index()];
        ExtPolyVector { poly, tails }
    }

    /// Layout: the n(w+1) polynomial coefficients followed by the n constants.
    pub fn from_flat(space: &Arc<CosetSpace>, flat: Vec<Scalar>) -> Result<Self> {
        let np = space.index() * (space.w() + 1);
        if flat.len() != np + space.index() {
            return Err(Error::Dimension(format!("expected {} entries, got {}", np + space.index(), flat.len())));
        }
        let mut flat = flat;
        let tails = flat.split_off(np);
        Self::new(PolyVector::from_flat(space, flat)?, tails)
    }

    pub fn flat(&self) -> Vec<Scalar> {
        self.poly.coeffs.iter().chain(&self.tails).cloned().collect()
    }

    pub fn space(&self) -> &Arc<CosetSpace> {
        &self.poly.space
    }

    pub fn field(&self) -> &ScalarField {
        &self.poly.field
    }

    /// c_{AT} = c_A along every T-step (the J-rule is built into the signs).
    pub fn tails_periodic(&self) -> bool {
        let sp = self.space();
        let w = sp.w();
        (0..sp.index()).all(|l| {
            let (l2, s) = sp.tables().t[l];
            self.tails[l2].fscale(&sign_pow(s, w)) == self.tails[l]
        })
    }

    /// Full Laurent coefficients X^{−1}, …, X^{w+1} per label.
    pub fn to_laurent(&self) -> Vec<Scalar> {
        let sp = self.space();
        let w = sp.w();
        let par = sign_pow(-1, w);
        let mut out = Vec::with_capacity(sp.index() * (w + 3));
        for l in 0..sp.index() {
            // A·S⁻¹ = A·S·J
            let (l1, s1) = sp.tables().s[l];
            let (l2, s2) = sp.tables().j[l1];
            let (l2, s) = (l2, s1 * s2);
            out.push(self.tails[l2].fscale(&(sign_pow(s, w) * &par)));
            out.extend(self.poly.value(l).0);
            out.push(self.tails[l].clone());
        }
        out
    }

    /// Inverse of `to_laurent`; fails if the X^{−1} coefficients are not the ones forced by the tails.
    pub fn from_laurent(space: &Arc<CosetSpace>, v: &[Scalar]) -> Result<Self> {
        let w = space.w();
        let n = space.index();
        if v.len() != n * (w + 3) {
            return Err(Error::Dimension(format!("expected {} Laurent coefficients, got {}", n * (w + 3), v.len())));
        }
        let mut poly = Vec::with_capacity(n * (w + 1));
        let mut tails = Vec::with_capacity(n);
        for l in 0..n {
            let b = &v[l * (w + 3)..(l + 1) * (w + 3)];
            poly.extend_from_slice(&b[1..w + 2]);
            tails.push(b[w + 2].clone());
        }
        let out = Self::new(PolyVector::from_flat(space, poly)?, tails)?;
        let back = out.to_laurent();
        if (0..n).any(|l| back[l * (w + 3)] != v[l * (w + 3)]) {
            return Err(Error::NotInSpace("X^-1 coefficients do not match the cusp constants".into()));
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Value {
        let sp = self.space();
        let mut v = self.poly.to_json();
        let mut map = Map::new();
        for l in 0..sp.index() {
            map.insert(sp.label_name(l), Value::String(self.tails[l].to_string()));
        }
        v["cusp_constants"] = Value::Object(map);
        v
    }

    pub fn from_json(space: &Arc<CosetSpace>, v: &Value) -> Result<Self> {
        let poly = PolyVector::from_json(space, v)?;
        let mut tails = vec![Scalar::from(0); space.index()];
        if let Some(c) = v.get("cusp_constants") {
            let map = c.as_object().ok_or_else(|| Error::Parse("cusp_constants must be a map".into()))?;
            for (k, x) in map {
                let l = space.parse_label(k)?;
                let s = x.as_str().ok_or_else(|| Error::Parse(format!("constant at {k} must be a \"p/q\" string")))?;
                tails[l] = Scalar::from(parse_rational(s)?);
            }
        }
        Self::new(poly, tails)
    }
}
