use num_traits::{One, Zero};
use serde_json::{json, Value};
use std::collections::{BTreeMap, HashMap};

use crate::cosets::Mat2;
use crate::error::{Error, Result};
use crate::exactalg::{format_rational, parse_rational, Rational};

/// Finite rational combination of integer matrices of determinant n, taken modulo ±1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    n: i64,
    terms: BTreeMap<Mat2, Rational>,
}

impl GroupRingElement {
    pub fn zero(n: i64) -> Self {
        GroupRingElement { n, terms: BTreeMap::new() }
    }

    pub fn identity() -> Self {
        Self::from_terms(1, [(Mat2::IDENTITY, Rational::one())]).unwrap()
    }

    pub fn from_terms(n: i64, terms: impl IntoIterator<Item = (Mat2, Rational)>) -> Result<Self> {
        let mut x = Self::zero(n);
        for (m, c) in terms {
            if m.det() != n {
                return Err(Error::Invalid(format!("{m} has determinant {}, expected {n}", m.det())));
            }
            x.add_term(m, c);
        }
        Ok(x)
    }

    fn add_term(&mut self, m: Mat2, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = m.canonical();
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn det(&self) -> i64 {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Mat2, Rational> {
        &self.terms
    }

    pub fn coeff(&self, m: &Mat2) -> Rational {
        self.terms.get(&m.canonical()).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_entry(&self) -> i64 {
        self.terms.keys().map(|m| m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs())).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.n != o.n {
            return Err(Error::Invalid(format!("adding elements of determinants {} and {}", self.n, o.n)));
        }
        let mut x = self.clone();
        for (m, c) in &o.terms {
            x.add_term(*m, c.clone());
        }
        Ok(x)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&-Rational::one()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut x = Self::zero(self.n);
        for (m, c) in &self.terms {
            x.add_term(*m, c * r);
        }
        x
    }

    /// Product in the monoid ring; determinants multiply.
    pub fn mul(&self, o: &Self) -> Self {
        let mut x = Self::zero(self.n * o.n);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                x.add_term(a.mul(b), ca * cb);
            }
        }
        x
    }

    pub fn left_mul(&self, g: &Mat2) -> Self {
        let mut x = Self::zero(self.n * g.det());
        for (m, c) in &self.terms {
            x.add_term(g.mul(m), c.clone());
        }
        x
    }

    pub fn right_mul(&self, g: &Mat2) -> Self {
        let mut x = Self::zero(self.n * g.det());
        for (m, c) in &self.terms {
            x.add_term(m.mul(g), c.clone());
        }
        x
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"matrix": [m.a, m.b, m.c, m.d], "coeff": format_rational(c)}))
                .collect(),
        )
    }

    /// Reads a term list; `n` is needed only to type an empty list.
    pub fn from_json(v: &Value, n: Option<i64>) -> Result<Self> {
        let list = v.as_array().ok_or_else(|| Error::Parse("group ring element must be a list".into()))?;
        let mut terms = Vec::new();
        for t in list {
            let m = t
                .get("matrix")
                .and_then(Value::as_array)
                .filter(|m| m.len() == 4)
                .ok_or_else(|| Error::Parse("term needs a 4-entry \"matrix\"".into()))?;
            let e: Vec<i64> = m
                .iter()
                .map(|x| x.as_i64().ok_or_else(|| Error::Parse("matrix entries must be integers".into())))
                .collect::<Result<_>>()?;
            let c = t.get("coeff").and_then(Value::as_str).ok_or_else(|| Error::Parse("term needs a \"coeff\" string".into()))?;
            terms.push((Mat2::new(e[0], e[1], e[2], e[3]), parse_rational(c)?));
        }
        let det = match (terms.first(), n) {
            (Some((m, _)), _) => m.det(),
            (None, Some(n)) => n,
            (None, None) => return Err(Error::Parse("empty element without a determinant".into())),
        };
        if let Some(n) = n {
            if n != det {
                return Err(Error::Parse(format!("expected determinant {n}, found {det}")));
            }
        }
        Self::from_terms(det, terms).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// T_n^∞: the upper triangular matrices (a b; 0 d) with ad = n, 0 ≤ b < d.
pub fn tn_infinity(n: i64) -> GroupRingElement {
    assert!(n >= 1, "tn_infinity needs n ≥ 1");
    let mut terms = Vec::new();
    for d in 1..=n {
        if n % d == 0 {
            for b in 0..d {
                terms.push((Mat2::new(n / d, b, 0, d), Rational::one()));
            }
        }
    }
    GroupRingElement::from_terms(n, terms).unwrap()
}

pub fn adjoint_vee(x: &GroupRingElement) -> GroupRingElement {
    GroupRingElement::from_terms(x.n, x.terms.iter().map(|(m, c)| (m.vee(), c.clone()))).unwrap()
}

/// Representative of the left ⟨±T⟩-orbit of m.
pub fn orbit_key(m: &Mat2) -> Mat2 {
    let m = m.canonical();
    if m.c != 0 {
        let j = m.a.div_euclid(m.c.abs()) * m.c.signum();
        // T^{−j} m
        Mat2::new(m.a - j * m.c, m.b - j * m.d, m.c, m.d)
    } else {
        let j = m.b.div_euclid(m.d.abs()) * m.d.signum();
        Mat2::new(m.a, m.b - j * m.d, 0, m.d)
    }
}

/// The j with m = T^j·orbit_key(m) (m canonical).
fn orbit_position(m: &Mat2, key: &Mat2) -> i64 {
    if m.c != 0 {
        (m.a - key.a) / m.c
    } else {
        (m.b - key.b) / m.d
    }
}

/// Tₙ^∞(1−S) − (1−S)·x.
pub fn hecke_defect(x: &GroupRingElement) -> GroupRingElement {
    let t = tn_infinity(x.n);
    let lhs = t.sub(&t.right_mul(&Mat2::S)).unwrap();
    let rhs = x.sub(&x.left_mul(&Mat2::S)).unwrap();
    lhs.sub(&rhs).unwrap()
}

/// Outcome of checking the defining identity.
#[derive(Clone, Debug, PartialEq)]
pub enum HeckeCheck {
    /// (1−T)·witness equals the defect exactly.
    Holds { witness: GroupRingElement },
    /// An orbit whose coefficient sum is nonzero.
    Fails { orbit: Mat2, sum: Rational },
}

impl HeckeCheck {
    pub fn holds(&self) -> bool {
        matches!(self, HeckeCheck::Holds { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            HeckeCheck::Holds { witness } => json!({"holds": true, "witness": witness.to_json()}),
            HeckeCheck::Fails { orbit, sum } => json!({
                "holds": false,
                "orbit": [orbit.a, orbit.b, orbit.c, orbit.d],
                "orbit_sum": format_rational(sum),
            }),
        }
    }
}

/// Left ⟨±T⟩-orbits act freely, so x lies in (1−T)Rₙ iff every orbit sum
/// vanishes; the witness is built from partial sums along each orbit.
pub fn verify_hecke_property(cand: &GroupRingElement, n: i64) -> Result<HeckeCheck> {
    if cand.n != n {
        return Err(Error::Invalid(format!("candidate has determinant {}, expected {n}", cand.n)));
    }
    let delta = hecke_defect(cand);
    let mut orbits: BTreeMap<Mat2, BTreeMap<i64, Rational>> = BTreeMap::new();
    for (m, c) in delta.terms() {
        let key = orbit_key(m);
        orbits.entry(key).or_default().insert(orbit_position(m, &key), c.clone());
    }
    let mut witness = GroupRingElement::zero(n);
    for (key, entries) in &orbits {
        let sum: Rational = entries.values().sum();
        if !sum.is_zero() {
            return Ok(HeckeCheck::Fails { orbit: *key, sum });
        }
        let lo = *entries.keys().next().unwrap();
        let hi = *entries.keys().next_back().unwrap();
        let mut acc = Rational::zero();
        for j in lo..hi {
            if let Some(c) = entries.get(&j) {
                acc += c;
            }
            witness.add_term(Mat2::T.pow(j).mul(key), acc.clone());
        }
    }
    Ok(HeckeCheck::Holds { witness })
}

/// Enumeration order of candidate matrices in the solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveOrder {
    /// Smaller entries first (the default).
    SmallFirst,
    /// Larger entries first; gives a second, generally different, solution.
    LargeFirst,
}

/// Canonical determinant-n matrices with all entries in [−bound, bound].
fn candidates(n: i64, bound: i64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for b in -bound..=bound {
        for c in -bound..=bound {
            let ad = n + b * c;
            if ad == 0 {
                for a in -bound..=bound {
                    if a == 0 {
                        for d in -bound..=bound {
                            out.push(Mat2::new(0, b, c, d));
                        }
                    } else {
                        out.push(Mat2::new(a, b, c, 0));
                    }
                }
                continue;
            }
            for a in 1..=bound.min(ad.abs()) {
                if ad % a == 0 {
                    let d = ad / a;
                    if d.abs() <= bound {
                        out.push(Mat2::new(a, b, c, d));
                        out.push(Mat2::new(-a, b, c, -d));
                    }
                }
            }
        }
    }
    out.retain(|m| m.is_canonical() && m.det() == n);
    out.sort_by_key(|m| (m.a.abs().max(m.b.abs()).max(m.c.abs()).max(m.d.abs()), *m));
    out.dedup();
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Solves Tₙ^∞(1−S) ≡ (1−S)T̃ modulo (1−T)Rₙ for T̃ supported on matrices
/// with entries in [−bound, bound]. Each unknown coefficient moves mass
/// between two orbits, so the orbit-sum system is the incidence system of a
/// graph and is solved exactly on a spanning forest.
pub fn solve_universal_hecke_ordered(n: i64, bound: i64, order: SolveOrder) -> Result<GroupRingElement> {
    if n < 1 {
        return Err(Error::Invalid(format!("n must be positive, got {n}")));
    }
    if bound < n {
        return Err(Error::Invalid(format!("entry bound {bound} is below n = {n}")));
    }
    if n == 1 {
        return Ok(GroupRingElement::identity());
    }
    let mut cands = candidates(n, bound);
    if order == SolveOrder::LargeFirst {
        cands.reverse();
    }
    let mut ids: HashMap<Mat2, usize> = HashMap::new();
    let id = |m: Mat2, ids: &mut HashMap<Mat2, usize>| {
        let l = ids.len();
        *ids.entry(orbit_key(&m)).or_insert(l)
    };
    // demand[K] = −(orbit sum of Tₙ^∞(1−S) at K)
    let t = tn_infinity(n);
    let rhs = t.sub(&t.right_mul(&Mat2::S))?;
    let mut demand_map: Vec<(usize, Rational)> = Vec::new();
    for (m, c) in rhs.terms() {
        let k = id(*m, &mut ids);
        demand_map.push((k, -c.clone()));
    }
    // x_M contributes −x to orbit(M) and +x to orbit(SM)
    let mut edges: Vec<(usize, usize, Mat2)> = Vec::new();
    for m in &cands {
        let u = id(*m, &mut ids);
        let v = id(Mat2::S.mul(m), &mut ids);
        if u != v {
            edges.push((u, v, *m));
        }
    }
    let nodes = ids.len();
    let mut demand = vec![Rational::zero(); nodes];
    for (k, c) in demand_map {
        demand[k] += c;
    }
    let mut parent: Vec<usize> = (0..nodes).collect();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nodes];
    for (e, (u, v, _)) in edges.iter().enumerate() {
        let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
        if ru != rv {
            parent[ru] = rv;
            adj[*u].push((*v, e));
            adj[*v].push((*u, e));
        }
    }
    // root each tree, then settle edges from the leaves up
    let mut seen = vec![false; nodes];
    let mut flow: BTreeMap<usize, Rational> = BTreeMap::new();
    for root in 0..nodes {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut order_nodes = vec![(root, usize::MAX)];
        let mut i = 0;
        while i < order_nodes.len() {
            let (x, _) = order_nodes[i];
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    order_nodes.push((y, e));
                }
            }
            i += 1;
        }
        for &(x, e) in order_nodes.iter().rev() {
            let need = std::mem::take(&mut demand[x]);
            if e == usize::MAX {
                if !need.is_zero() {
                    return Err(Error::Infeasible { n, bound });
                }
                continue;
            }
            let (u, v, _) = edges[e];
            let other = if x == u { v } else { u };
            // contribution at x is −f if x = u, +f if x = v
            let f = if x == u { -need.clone() } else { need.clone() };
            if !f.is_zero() {
                // the same flow shows up with the opposite sign at the other end
                demand[other] += &need;
                flow.insert(e, f);
            }
        }
    }
    let out = GroupRingElement::from_terms(n, flow.into_iter().map(|(e, f)| (edges[e].2, f)))?;
    match verify_hecke_property(&out, n)? {
        HeckeCheck::Holds { .. } => Ok(out),
        HeckeCheck::Fails { .. } => Err(Error::Infeasible { n, bound }),
    }
}

/// The adjoints of the matrices (a b; c d) with a > b ≥ 0, d > c ≥ 0,
/// ad − bc = n, with unit coefficients.
pub fn heilbronn_vee(n: i64) -> GroupRingElement {
    let mut terms = Vec::new();
    for a in 1..=n {
        for d in 1..=n {
            for b in 0..a {
                for c in 0..d {
                    if a * d - b * c == n {
                        terms.push((Mat2::new(a, b, c, d).vee(), Rational::one()));
                    }
                }
            }
        }
    }
    GroupRingElement::from_terms(n, terms).unwrap()
}

/// A T̃ₙ with entries bounded by `bound`. The Heilbronn-type candidate is
/// tried first and kept only if it passes the exact check; otherwise the
/// orbit system is solved.
pub fn solve_universal_hecke(n: i64, bound: i64) -> Result<GroupRingElement> {
    if n < 1 {
        return Err(Error::Invalid(format!("n must be positive, got {n}")));
    }
    if bound < n {
        return Err(Error::Invalid(format!("entry bound {bound} is below n = {n}")));
    }
    let h = heilbronn_vee(n);
    if h.max_entry() <= bound && verify_hecke_property(&h, n)?.holds() {
        return Ok(h);
    }
    solve_universal_hecke_ordered(n, bound, SolveOrder::SmallFirst)
}
