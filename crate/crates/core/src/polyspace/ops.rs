//! Linear operators on the flat coordinates of polynomial vectors, assembled
//! from per-label slash contributions.

use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};

use super::poly::{laurent_slash_monomial, slash_matrix, LaurentImage};
use super::vector::{join_fields, sign_pow};
use crate::cosets::{CosetSpace, Mat2};
use crate::error::{Error, Result};
use crate::exactalg::{Field, Rational, Scalar, SparseRow};

/// out[label] += coeff · stored[input] | m.
#[derive(Clone, Debug, PartialEq)]
pub struct Contribution {
    pub out: usize,
    pub input: usize,
    pub coeff: Rational,
    pub m: Mat2,
}

/// Contributions of P ↦ coeff·P|g for g of determinant ±1:
/// (P|g)(A) = P(A g⁻¹)|g, read through the signed labels.
pub fn slash_contributions(space: &CosetSpace, g: &Mat2, coeff: &Rational) -> Result<Vec<Contribution>> {
    let ginv = g.inverse().ok_or_else(|| Error::Invalid(format!("{g} is not unimodular")))?;
    let w = space.w();
    (0..space.index())
        .map(|l| {
            let (input, s) = space.act(l, &ginv)?;
            Ok(Contribution { out: l, input, coeff: coeff * sign_pow(s, w), m: *g })
        })
        .collect()
}

/// Contributions of P ↦ Σ coeff_g·P|g.
pub fn group_ring_contributions(space: &CosetSpace, terms: &[(Mat2, Rational)]) -> Result<Vec<Contribution>> {
    let mut out = Vec::new();
    for (g, c) in terms {
        out.extend(slash_contributions(space, g, c)?);
    }
    Ok(out)
}

fn accumulate(rows: &mut [BTreeMap<usize, Rational>], r: usize, c: usize, v: Rational) {
    if v.is_zero() {
        return;
    }
    let e = rows[r].entry(c).or_insert_with(Rational::zero);
    *e += v;
}

fn finish(rows: Vec<BTreeMap<usize, Rational>>) -> Vec<SparseRow<Rational>> {
    rows.into_iter().map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect()).collect()
}

pub(crate) fn apply_rows(rows: &[SparseRow<Rational>], v: &[Scalar]) -> Vec<Scalar> {
    let field = join_fields(v).expect("vector entries share a field");
    rows.iter()
        .map(|r| {
            r.iter().fold(field.zero(), |acc, (c, a)| {
                if v[*c].is_zero_elt() {
                    acc
                } else {
                    acc.fadd(&v[*c].fscale(a))
                }
            })
        })
        .collect()
}

/// Sparse rational matrix acting on the (label, coefficient) coordinates of V_w^Γ.
#[derive(Clone, Debug, PartialEq)]
pub struct LinOp {
    pub nrows: usize,
    pub ncols: usize,
    pub rows: Vec<SparseRow<Rational>>,
}

impl LinOp {
    pub fn from_contributions(space: &CosetSpace, contribs: &[Contribution]) -> Self {
        let m = space.w() + 1;
        let n = space.index() * m;
        let mut rows = vec![BTreeMap::new(); n];
        let mut cache: HashMap<Mat2, Vec<Vec<Rational>>> = HashMap::new();
        for c in contribs {
            let sm = cache.entry(c.m).or_insert_with(|| slash_matrix(&c.m, space.w()));
            for i in 0..m {
                for j in 0..m {
                    if !sm[i][j].is_zero() {
                        accumulate(&mut rows, c.out * m + i, c.input * m + j, &c.coeff * &sm[i][j]);
                    }
                }
            }
        }
        LinOp { nrows: n, ncols: n, rows: finish(rows) }
    }

    /// P ↦ P|g.
    pub fn slash(space: &CosetSpace, g: &Mat2) -> Result<Self> {
        Ok(Self::from_contributions(space, &slash_contributions(space, g, &Rational::from_integer(1.into()))?))
    }

    /// P ↦ Σ c_g P|g.
    pub fn group_ring(space: &CosetSpace, terms: &[(Mat2, Rational)]) -> Result<Self> {
        Ok(Self::from_contributions(space, &group_ring_contributions(space, terms)?))
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols, "operator applied to a vector of the wrong length");
        apply_rows(&self.rows, v)
    }
}

/// Which coefficient of a rational function a relation row reads.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Slot {
    /// coefficient of X^{i−1}
    Laurent(usize),
    /// residue at a nonzero rational pole
    Pole(Rational),
}

/// Operator on full Laurent data (X^{−1}, …, X^{w+1} per label) whose image
/// is written in partial fractions: a Laurent part plus simple poles.
#[derive(Clone, Debug)]
pub struct LaurentOp {
    pub index: usize,
    pub w: usize,
    pub rows: BTreeMap<(usize, Slot), SparseRow<Rational>>,
}

impl LaurentOp {
    pub fn from_contributions(space: &CosetSpace, contribs: &[Contribution]) -> Self {
        let w = space.w();
        let len = w + 3;
        let mut acc: BTreeMap<(usize, Slot), BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut cache: HashMap<(Mat2, i64), LaurentImage> = HashMap::new();
        for c in contribs {
            for e in -1..=(w as i64 + 1) {
                let im = cache.entry((c.m, e)).or_insert_with(|| laurent_slash_monomial(e, &c.m, w));
                let col = c.input * len + (e + 1) as usize;
                for (i, v) in im.laurent.iter().enumerate() {
                    if !v.is_zero() {
                        *acc.entry((c.out, Slot::Laurent(i))).or_default().entry(col).or_insert_with(Rational::zero) +=
                            &c.coeff * v;
                    }
                }
                if let Some((r, v)) = &im.pole {
                    *acc.entry((c.out, Slot::Pole(r.clone()))).or_default().entry(col).or_insert_with(Rational::zero) +=
                        &c.coeff * v;
                }
            }
        }
        let rows = acc
            .into_iter()
            .map(|(k, r)| (k, r.into_iter().filter(|(_, v)| !v.is_zero()).collect::<SparseRow<Rational>>()))
            .filter(|(_, r)| !r.is_empty())
            .collect();
        LaurentOp { index: space.index(), w, rows }
    }

    pub fn ncols(&self) -> usize {
        self.index * (self.w + 3)
    }

    /// All rows; the image is zero iff every row vanishes.
    pub fn relation_rows(&self) -> impl Iterator<Item = &SparseRow<Rational>> {
        self.rows.values()
    }

    /// Laurent image (n(w+3) entries) and the nonzero pole residues.
    pub fn apply(&self, v: &[Scalar]) -> (Vec<Scalar>, Vec<((usize, Rational), Scalar)>) {
        assert_eq!(v.len(), self.ncols());
        let field = join_fields(v).expect("vector entries share a field");
        let len = self.w + 3;
        let mut laurent = vec![field.zero(); self.ncols()];
        let mut poles = Vec::new();
        for ((l, slot), row) in &self.rows {
            let x = apply_rows(std::slice::from_ref(row), v).pop().unwrap();
            match slot {
                Slot::Laurent(i) => laurent[l * len + i] = x,
                Slot::Pole(r) => {
                    if !x.is_zero_elt() {
                        poles.push(((*l, r.clone()), x));
                    }
                }
            }
        }
        (laurent, poles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cosets::GroupKind;
    use crate::exactalg::int;
    use crate::polyspace::{ExtPolyVector, PolyVector};
    use proptest::prelude::*;
    use std::sync::Arc;

    fn word(idx: &[usize]) -> Mat2 {
        let gens = [Mat2::S, Mat2::T, Mat2::T_INV, Mat2::U];
        idx.iter().fold(Mat2::IDENTITY, |acc, &i| acc.mul(&gens[i]))
    }

    fn sample(space: &Arc<CosetSpace>, seed: &[i64]) -> PolyVector {
        let n = space.index() * (space.w() + 1);
        PolyVector::from_flat(space, (0..n).map(|i| Scalar::from(seed[i % seed.len()] + (i as i64 % 3))).collect()).unwrap()
    }

    proptest! {
        #[test]
        fn slash_is_a_right_action(a in proptest::collection::vec(0usize..4, 0..5), b in proptest::collection::vec(0usize..4, 0..5), seed in proptest::collection::vec(-4i64..5, 1..6)) {
            for sp in [CosetSpace::build(GroupKind::Gamma0, 6, 4).unwrap(), CosetSpace::build(GroupKind::Gamma1, 5, 3).unwrap()] {
                let sp = Arc::new(sp);
                let p = sample(&sp, &seed);
                let (g, h) = (word(&a), word(&b));
                prop_assert_eq!(p.slash(&g).unwrap().slash(&h).unwrap(), p.slash(&g.mul(&h)).unwrap());
            }
        }

        #[test]
        fn eps_twists_the_action(a in proptest::collection::vec(0usize..4, 0..5), seed in proptest::collection::vec(-4i64..5, 1..6)) {
            let sp = Arc::new(CosetSpace::build(GroupKind::Gamma1, 7, 4).unwrap());
            let p = sample(&sp, &seed);
            let g = word(&a);
            // P|g|ε = P|ε|εgε
            prop_assert_eq!(p.slash(&g).unwrap().eps(), p.eps().slash(&g.eps_conj()).unwrap());
            prop_assert_eq!(p.eps().eps(), p);
        }
    }

    #[test]
    fn laurent_op_agrees_with_polynomial_slash() {
        let sp = Arc::new(CosetSpace::build(GroupKind::Gamma0, 5, 4).unwrap());
        let p = sample(&sp, &[1, -2, 3]);
        let e = ExtPolyVector::from_poly(p.clone());
        for g in [Mat2::S, Mat2::U, Mat2::U2, Mat2::new(2, 1, 1, 1)] {
            let contribs = slash_contributions(&sp, &g, &int(1)).unwrap();
            let (lau, poles) = LaurentOp::from_contributions(&sp, &contribs).apply(&e.to_laurent());
            assert!(poles.is_empty());
            let back = ExtPolyVector::from_laurent(&sp, &lau).unwrap();
            assert_eq!(back.poly, p.slash(&g).unwrap());
        }
    }
}
