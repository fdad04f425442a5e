use num_integer::Integer;
use serde::{Deserialize, Serialize};
use std::fmt;

use super::Mat2;
use crate::error::{Error, Result};
use crate::exactalg::{egcd, inv_mod};

/// Which congruence subgroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupKind {
    Gamma0,
    Gamma1,
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupKind::Gamma0 => write!(f, "gamma0"),
            GroupKind::Gamma1 => write!(f, "gamma1"),
        }
    }
}

impl std::str::FromStr for GroupKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gamma0" | "g0" => Ok(GroupKind::Gamma0),
            "gamma1" | "g1" => Ok(GroupKind::Gamma1),
            _ => Err(Error::Parse(format!("unknown group {s:?} (expected gamma0 or gamma1)"))),
        }
    }
}

/// A label together with the sign of the representative actually hit.
pub type Signed = (usize, i8);

/// Right multiplication tables for the standard generators.
#[derive(Clone, Debug)]
pub struct ActionTables {
    pub s: Vec<Signed>,
    pub t: Vec<Signed>,
    pub t_inv: Vec<Signed>,
    pub u: Vec<Signed>,
    pub u2: Vec<Signed>,
    pub j: Vec<Signed>,
}

/// The cosets Γ\SL₂(ℤ) for Γ = Γ₀(N) or Γ₁(N), indexed by bottom rows mod N.
#[derive(Clone, Debug)]
pub struct CosetSpace {
    kind: GroupKind,
    level: i64,
    weight: i64,
    minus_one: bool,
    labels: Vec<(i64, i64)>,
    lifts: Vec<Mat2>,
    lookup: Vec<(u32, i8)>,
    tables: ActionTables,
    eps: Vec<Signed>,
}

const NONE: u32 = u32::MAX;

fn p1_canonical(c: i64, d: i64, n: i64, units: &[i64]) -> (i64, i64) {
    if let Some(u) = inv_mod(c, n) {
        return (1 % n, (d * u).rem_euclid(n));
    }
    if let Some(u) = inv_mod(d, n) {
        return ((c * u).rem_euclid(n), 1 % n);
    }
    units.iter().map(|u| ((c * u).rem_euclid(n), (d * u).rem_euclid(n))).min().unwrap()
}

/// An SL₂(ℤ) matrix with bottom row ≡ (c, d) mod n.
fn lift_row(c: i64, d: i64, n: i64) -> Mat2 {
    if n == 1 {
        return Mat2::IDENTITY;
    }
    let c1 = if c.rem_euclid(n) == 0 { n } else { c.rem_euclid(n) };
    let mut d1 = d.rem_euclid(n);
    while c1.gcd(&d1) != 1 {
        d1 += n;
    }
    let (_, x, y) = egcd(d1, c1);
    // x d1 + y c1 = 1, so (x, −y; c1, d1) has determinant 1
    Mat2::new(x, -y, c1, d1)
}

impl CosetSpace {
    /// Enumerates the cosets and precomputes all action tables.
    pub fn build(kind: GroupKind, level: i64, weight: i64) -> Result<Self> {
        if level < 1 {
            return Err(Error::Invalid(format!("level must be positive, got {level}")));
        }
        if weight < 2 {
            return Err(Error::Invalid(format!("weight must be at least 2, got {weight}")));
        }
        if level > 4000 {
            return Err(Error::Invalid(format!("level {level} is beyond the supported range")));
        }
        let n = level;
        let minus_one = kind == GroupKind::Gamma0 || n <= 2;
        let units: Vec<i64> = (0..n).filter(|u| u.gcd(&n) == 1).collect();
        let mut lookup = vec![(NONE, 1i8); (n * n) as usize];
        let mut labels: Vec<(i64, i64)> = Vec::new();
        let mut canon_of = vec![(0i64, 0i64, 1i8); (n * n) as usize];
        let valid = |c: i64, d: i64| c.gcd(&d).gcd(&n) == 1;
        for c in 0..n {
            for d in 0..n {
                if !valid(c, d) {
                    continue;
                }
                let (cc, dd, s) = match kind {
                    _ if n == 1 => (0, 1, 1),
                    GroupKind::Gamma0 => {
                        let (x, y) = p1_canonical(c, d, n, &units);
                        (x, y, 1)
                    }
                    GroupKind::Gamma1 => {
                        let neg = ((n - c) % n, (n - d) % n);
                        if neg < (c, d) {
                            (neg.0, neg.1, if minus_one { 1 } else { -1 })
                        } else {
                            (c, d, 1)
                        }
                    }
                };
                canon_of[(c * n + d) as usize] = (cc, dd, s);
            }
        }
        // label order: for Γ₀ the classes of (c:1), c = 0..N−1, then the rest; for Γ₁ lexicographic
        let push = |row: (i64, i64), labels: &mut Vec<(i64, i64)>| {
            if !labels.contains(&row) {
                labels.push(row);
            }
        };
        if n == 1 {
            labels.push((0, 1));
        } else if kind == GroupKind::Gamma0 {
            for c in 0..n {
                let (x, y, _) = canon_of[(c * n + 1) as usize];
                push((x, y), &mut labels);
            }
            let mut rest: Vec<(i64, i64)> = Vec::new();
            for c in 0..n {
                for d in 0..n {
                    if valid(c, d) {
                        let (x, y, _) = canon_of[(c * n + d) as usize];
                        rest.push((x, y));
                    }
                }
            }
            rest.sort();
            rest.dedup();
            for r in rest {
                push(r, &mut labels);
            }
        } else {
            for c in 0..n {
                for d in 0..n {
                    if valid(c, d) {
                        let (x, y, _) = canon_of[(c * n + d) as usize];
                        if (x, y) == (c, d) {
                            labels.push((x, y));
                        }
                    }
                }
            }
        }
        let index_of: std::collections::HashMap<(i64, i64), u32> =
            labels.iter().enumerate().map(|(i, r)| (*r, i as u32)).collect();
        for c in 0..n {
            for d in 0..n {
                if valid(c, d) {
                    let (x, y, s) = canon_of[(c * n + d) as usize];
                    lookup[(c * n + d) as usize] = (index_of[&(x, y)], s);
                }
            }
        }
        let lifts: Vec<Mat2> = labels.iter().map(|&(c, d)| lift_row(c, d, n)).collect();
        let empty = ActionTables { s: vec![], t: vec![], t_inv: vec![], u: vec![], u2: vec![], j: vec![] };
        let mut space = CosetSpace { kind, level, weight, minus_one, labels, lifts, lookup, tables: empty, eps: vec![] };
        let table = |g: Mat2, sp: &CosetSpace| -> Vec<Signed> {
            (0..sp.index()).map(|l| sp.act(l, &g).expect("unimodular generator")).collect()
        };
        let tables = ActionTables {
            s: table(Mat2::S, &space),
            t: table(Mat2::T, &space),
            t_inv: table(Mat2::T_INV, &space),
            u: table(Mat2::U, &space),
            u2: table(Mat2::U2, &space),
            j: table(Mat2::J, &space),
        };
        let eps = (0..space.index())
            .map(|l| {
                let m = space.lifts[l].eps_conj();
                space.lookup_row(m.c, m.d).expect("ε preserves primitive rows")
            })
            .collect();
        space.tables = tables;
        space.eps = eps;
        Ok(space)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn level(&self) -> i64 {
        self.level
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    /// w = k − 2.
    pub fn w(&self) -> usize {
        (self.weight - 2) as usize
    }

    /// True when −1 ∈ Γ.
    pub fn contains_minus_one(&self) -> bool {
        self.minus_one
    }

    /// −1 ∈ Γ with odd weight: every polynomial space is zero.
    pub fn is_degenerate(&self) -> bool {
        self.minus_one && self.weight % 2 == 1
    }

    /// The projectivized index [Γ̄₁ : Γ̄].
    pub fn index(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[(i64, i64)] {
        &self.labels
    }

    pub fn lift(&self, label: usize) -> Mat2 {
        self.lifts[label]
    }

    pub fn tables(&self) -> &ActionTables {
        &self.tables
    }

    /// Label of εAε with its sign.
    pub fn eps_table(&self) -> &[Signed] {
        &self.eps
    }

    /// (−1)^w as a sign.
    pub fn parity(&self) -> i8 {
        if self.weight % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Label and sign of the coset with bottom row ≡ (c, d) mod N.
    pub fn lookup_row(&self, c: i64, d: i64) -> Option<Signed> {
        let n = self.level;
        let (l, s) = self.lookup[(c.rem_euclid(n) * n + d.rem_euclid(n)) as usize];
        (l != NONE).then_some((l as usize, s))
    }

    /// Coset of (lift of `label`)·g.
    pub fn act(&self, label: usize, g: &Mat2) -> Result<Signed> {
        if g.det().abs() != 1 {
            return Err(Error::Invalid(format!("{g} is not unimodular")));
        }
        let a = &self.lifts[label];
        let c = a.c * g.a + a.d * g.c;
        let d = a.c * g.b + a.d * g.d;
        Ok(self.lookup_row(c, d).expect("unimodular image has a primitive row"))
    }

    /// Action on a signed label.
    pub fn act_signed(&self, x: Signed, g: &Mat2) -> Result<Signed> {
        let (l, s) = self.act(x.0, g)?;
        Ok((l, s * x.1))
    }

    pub fn label_name(&self, label: usize) -> String {
        let (c, d) = self.labels[label];
        match self.kind {
            GroupKind::Gamma0 => format!("({c}:{d})"),
            GroupKind::Gamma1 => format!("({c},{d})"),
        }
    }

    /// Parses "(c:d)" or "(c,d)" back to a label.
    pub fn parse_label(&self, s: &str) -> Result<usize> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split([':', ',']).collect();
        let bad = || Error::Parse(format!("bad coset label {s:?}"));
        if parts.len() != 2 {
            return Err(bad());
        }
        let c: i64 = parts[0].trim().parse().map_err(|_| bad())?;
        let d: i64 = parts[1].trim().parse().map_err(|_| bad())?;
        self.labels.iter().position(|r| *r == (c, d)).ok_or_else(bad)
    }

    /// Label of an arbitrary SL₂(ℤ) matrix.
    pub fn label_of(&self, g: &Mat2) -> Result<Signed> {
        self.act(0, g)
    }
}
