use std::sync::Arc;

use super::vector::{same_space, ExtPolyVector, PolyVector};
use crate::cosets::CosetSpace;
use crate::error::{Error, Result};
use crate::exactalg::{rref, DenseMatrix, Field, Scalar, ScalarField, SparseRow};

/// Coordinates of the ambient space: V_w^Γ (n(w+1) entries) or the
/// extended (P, c) model (n(w+1) + n entries).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Poly,
    Ext,
}

impl Layout {
    pub fn ambient_dim(&self, space: &CosetSpace) -> usize {
        let n = space.index();
        match self {
            Layout::Poly => n * (space.w() + 1),
            Layout::Ext => n * (space.w() + 2),
        }
    }
}

/// A subspace with basis in reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    space: Arc<CosetSpace>,
    layout: Layout,
    field: ScalarField,
    pivots: Vec<usize>,
    basis: Vec<Vec<Scalar>>,
}

fn to_sparse(v: &[Scalar]) -> SparseRow<Scalar> {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero_elt()).map(|(i, x)| (i, x.clone())).collect()
}

impl Subspace {
    /// Span of the given vectors (dependent ones are dropped).
    pub fn span(space: &Arc<CosetSpace>, layout: Layout, field: &ScalarField, vecs: Vec<Vec<Scalar>>) -> Result<Self> {
        let amb = layout.ambient_dim(space);
        if let Some(v) = vecs.iter().find(|v| v.len() != amb) {
            return Err(Error::Dimension(format!("vector of length {} in an ambient space of dimension {}", v.len(), amb)));
        }
        if !field.is_exact() {
            return Err(Error::InexactField);
        }
        let rows: Vec<SparseRow<Scalar>> =
            vecs.iter().map(|v| to_sparse(&v.iter().map(|x| x.coerce(field)).collect::<Vec<_>>())).collect();
        let ech = rref(rows, amb);
        Ok(Self::from_echelon(space, layout, field, ech.pivots, ech.rows))
    }

    pub(crate) fn from_echelon(
        space: &Arc<CosetSpace>,
        layout: Layout,
        field: &ScalarField,
        pivots: Vec<usize>,
        rows: Vec<SparseRow<Scalar>>,
    ) -> Self {
        let amb = layout.ambient_dim(space);
        let basis = rows
            .into_iter()
            .map(|r| {
                let mut d = vec![field.zero(); amb];
                for (c, x) in r {
                    d[c] = x.coerce(field);
                }
                d
            })
            .collect();
        Subspace { space: space.clone(), layout, field: field.clone(), pivots, basis }
    }

    pub fn zero(space: &Arc<CosetSpace>, layout: Layout, field: &ScalarField) -> Self {
        Subspace { space: space.clone(), layout, field: field.clone(), pivots: vec![], basis: vec![] }
    }

    pub fn space(&self) -> &Arc<CosetSpace> {
        &self.space
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn field(&self) -> &ScalarField {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.layout.ambient_dim(&self.space)
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Basis vectors as columns.
    pub fn basis_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_columns(&self.field, self.ambient_dim(), &self.basis)
    }

    pub fn poly_vector(&self, i: usize) -> PolyVector {
        assert_eq!(self.layout, Layout::Poly);
        PolyVector::from_flat(&self.space, self.basis[i].clone()).expect("basis vector has ambient length")
    }

    /// Basis vector as an extended vector (zero tails for the plain layout).
    pub fn ext_vector(&self, i: usize) -> ExtPolyVector {
        match self.layout {
            Layout::Ext => ExtPolyVector::from_flat(&self.space, self.basis[i].clone()).expect("ambient length"),
            Layout::Poly => ExtPolyVector::from_poly(self.poly_vector(i)),
        }
    }

    /// Coordinates in the echelon basis, or `None` if v is outside the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim() {
            return None;
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        // v − Σ coords_i basis_i must vanish
        for (j, x) in v.iter().enumerate() {
            let mut acc = x.clone();
            for (c, b) in coords.iter().zip(&self.basis) {
                if !b[j].is_zero_elt() && !c.is_zero_elt() {
                    acc = acc.fsub(&c.fmul(&b[j]));
                }
            }
            if !acc.is_zero_elt() {
                return None;
            }
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_poly(&self, p: &PolyVector) -> bool {
        same_space(&self.space, p.space()) && self.layout == Layout::Poly && self.contains(p.flat())
    }

    pub fn contains_ext(&self, p: &ExtPolyVector) -> bool {
        same_space(&self.space, p.space()) && self.layout == Layout::Ext && self.contains(&p.flat())
    }

    /// Σ cᵢ basisᵢ.
    pub fn combine(&self, coords: &[Scalar]) -> Vec<Scalar> {
        let field = coords.iter().fold(self.field.clone(), |f, x| f.join(&x.field()).expect("compatible fields"));
        let mut out = vec![field.zero(); self.ambient_dim()];
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero_elt() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero_elt() {
                    *o = o.fadd(&c.fmul(x));
                }
            }
        }
        out
    }

    pub fn is_subspace_of(&self, o: &Subspace) -> bool {
        self.layout == o.layout && self.basis.iter().all(|b| o.contains(b))
    }

    /// Sum of two subspaces of the same ambient space.
    pub fn sum(&self, o: &Subspace) -> Result<Subspace> {
        if self.layout != o.layout || !same_space(&self.space, &o.space) {
            return Err(Error::Invalid("subspaces live in different ambient spaces".into()));
        }
        let field = self.field.join(&o.field).ok_or_else(|| Error::FieldMismatch("subspace fields".into()))?;
        Subspace::span(&self.space, self.layout, &field, self.basis.iter().chain(&o.basis).cloned().collect())
    }

    /// Same subspace with the basis moved into a larger field.
    pub fn extend_field(&self, field: &ScalarField) -> Result<Subspace> {
        let f = self.field.join(field).ok_or_else(|| Error::FieldMismatch("subspace field".into()))?;
        Ok(Subspace {
            space: self.space.clone(),
            layout: self.layout,
            field: f.clone(),
            pivots: self.pivots.clone(),
            basis: self.basis.iter().map(|b| b.iter().map(|x| x.coerce(&f)).collect()).collect(),
        })
    }
}
