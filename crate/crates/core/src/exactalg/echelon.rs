//! Row echelon forms over exact fields, with rows stored sparsely.
//!
//! Pivoting takes the leftmost column that still has a nonzero entry and,
//! among the rows leading in that column, the one with fewest entries.

use rayon::prelude::*;
use std::collections::BTreeMap;

use super::Field;

/// Sorted `(column, value)` pairs with no stored zeros.
pub type SparseRow<F> = Vec<(usize, F)>;

/// Reduced row echelon form: `rows[i]` has a leading 1 in `pivots[i]` and zeros
/// in every other pivot column.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub ncols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseRow<F>>,
}

impl<F: Field> Echelon<F> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// `r − c·p`, both sorted.
pub(crate) fn axpy<F: Field>(r: &[(usize, F)], c: &F, p: &[(usize, F)]) -> SparseRow<F> {
    let mut out = Vec::with_capacity(r.len() + p.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < p.len() {
        let take_r = j >= p.len() || (i < r.len() && r[i].0 < p[j].0);
        let take_p = i >= r.len() || (j < p.len() && p[j].0 < r[i].0);
        if take_r {
            out.push(r[i].clone());
            i += 1;
        } else if take_p {
            out.push((p[j].0, c.fmul(&p[j].1).fneg()));
            j += 1;
        } else {
            let v = r[i].1.fsub(&c.fmul(&p[j].1));
            if !v.is_zero_elt() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn normalize<F: Field>(row: SparseRow<F>) -> SparseRow<F> {
    let inv = row[0].1.finv().expect("leading entry is nonzero");
    row.into_iter().map(|(c, v)| (c, v.fmul(&inv))).collect()
}

/// Reduced row echelon form of the given rows.
pub fn rref<F: Field>(rows: impl IntoIterator<Item = SparseRow<F>>, ncols: usize) -> Echelon<F> {
    let mut buckets: BTreeMap<usize, Vec<SparseRow<F>>> = BTreeMap::new();
    for mut r in rows {
        r.retain(|(_, v)| !v.is_zero_elt());
        debug_assert!(r.windows(2).all(|w| w[0].0 < w[1].0), "sparse row not sorted");
        if let Some(&(c, _)) = r.first() {
            debug_assert!(c < ncols);
            buckets.entry(c).or_default().push(r);
        }
    }
    let mut pivots = Vec::new();
    let mut prows: Vec<SparseRow<F>> = Vec::new();
    while let Some((col, mut group)) = buckets.pop_first() {
        let best = (0..group.len()).min_by_key(|&i| group[i].len()).unwrap();
        let pivot = normalize(group.swap_remove(best));
        let reduce = |r: SparseRow<F>| {
            let c = r[0].1.clone();
            axpy(&r, &c, &pivot)
        };
        let reduced: Vec<SparseRow<F>> = if group.len() > 32 {
            group.into_par_iter().map(reduce).collect()
        } else {
            group.into_iter().map(reduce).collect()
        };
        for r in reduced {
            if let Some(&(c, _)) = r.first() {
                buckets.entry(c).or_default().push(r);
            }
        }
        pivots.push(col);
        prows.push(pivot);
    }
    // back substitution, last pivot first
    let mut where_pivot = vec![usize::MAX; ncols];
    for (i, &p) in pivots.iter().enumerate() {
        where_pivot[p] = i;
    }
    for i in (0..prows.len()).rev() {
        let targets: Vec<(usize, F)> = prows[i][1..]
            .iter()
            .filter(|(c, _)| where_pivot[*c] != usize::MAX)
            .cloned()
            .collect();
        let mut row = std::mem::take(&mut prows[i]);
        for (c, v) in targets {
            row = axpy(&row, &v, &prows[where_pivot[c]]);
        }
        prows[i] = row;
    }
    Echelon { ncols, pivots, rows: prows }
}

/// Basis of the right null space, returned in reduced row echelon form
/// (each vector as a sparse row).
pub fn sparse_kernel<F: Field>(
    rows: impl IntoIterator<Item = SparseRow<F>>,
    ncols: usize,
    ctx: &F::Ctx,
) -> Vec<SparseRow<F>> {
    let ech = rref(rows, ncols);
    kernel_from_echelon(&ech, ctx)
}

pub(crate) fn kernel_from_echelon<F: Field>(ech: &Echelon<F>, ctx: &F::Ctx) -> Vec<SparseRow<F>> {
    let ncols = ech.ncols;
    let mut free_index = vec![usize::MAX; ncols];
    let mut is_pivot = vec![false; ncols];
    for &p in &ech.pivots {
        is_pivot[p] = true;
    }
    let mut free = Vec::new();
    for c in 0..ncols {
        if !is_pivot[c] {
            free_index[c] = free.len();
            free.push(c);
        }
    }
    let mut vecs: Vec<SparseRow<F>> = free.iter().map(|&f| vec![(f, F::one_in(ctx))]).collect();
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        for (c, v) in &row[1..] {
            vecs[free_index[*c]].push((p, v.fneg()));
        }
    }
    for v in vecs.iter_mut() {
        v.sort_by_key(|e| e.0);
    }
    rref(vecs, ncols).rows
}
