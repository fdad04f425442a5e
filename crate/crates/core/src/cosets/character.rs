use num_integer::Integer;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::exactalg::{Cyclo, Scalar, ScalarField};

/// A Dirichlet character mod N with values ζ_m^{e(a)}, m = order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Character {
    modulus: i64,
    order: u64,
    /// exponent of ζ_order at each residue, `None` off the units
    exps: Vec<Option<u64>>,
}

fn units(n: i64) -> Vec<i64> {
    (0..n).filter(|u| u.gcd(&n) == 1).collect()
}

fn mult_order(u: i64, n: i64) -> u64 {
    if n == 1 {
        return 1;
    }
    let mut x = u.rem_euclid(n);
    let mut k = 1;
    while x != 1 {
        x = (x * u).rem_euclid(n);
        k += 1;
    }
    k
}

impl Character {
    pub fn trivial(modulus: i64) -> Self {
        let exps = (0..modulus).map(|a| (a.gcd(&modulus) == 1).then_some(0)).collect();
        Character { modulus, order: 1, exps }
    }

    /// Builds a character from exponents of ζ_m on all residues (units only are read).
    pub fn from_exponents(modulus: i64, m: u64, exps: &[Option<u64>]) -> Result<Self> {
        if exps.len() != modulus as usize {
            return Err(Error::Invalid("character table length must equal the modulus".into()));
        }
        let c = Character { modulus, order: m, exps: exps.to_vec() };
        let c = c.reduced();
        if !c.is_multiplicative() {
            return Err(Error::Invalid("character table is not multiplicative".into()));
        }
        Ok(c)
    }

    /// All Dirichlet characters mod N, trivial first, in a fixed order.
    pub fn all(modulus: i64) -> Vec<Character> {
        let n = modulus;
        let us = units(n);
        let e = us.iter().fold(1u64, |acc, &u| acc.lcm(&mult_order(u, n)));
        // greedy generating set
        let mut gens: Vec<i64> = Vec::new();
        let mut span = vec![false; n as usize];
        span[(1 % n) as usize] = true;
        for &u in &us {
            if span[u as usize] {
                continue;
            }
            gens.push(u);
            let mut queue: VecDeque<i64> = (0..n).filter(|&x| span[x as usize]).collect();
            while let Some(x) = queue.pop_front() {
                for &g in &gens {
                    let y = (x * g).rem_euclid(n);
                    if !span[y as usize] {
                        span[y as usize] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        let choices: Vec<Vec<u64>> = gens
            .iter()
            .map(|&g| {
                let o = mult_order(g, n);
                (0..e).filter(|x| (x * o) % e == 0).collect()
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; gens.len()];
        loop {
            let assign: Vec<u64> = idx.iter().zip(&choices).map(|(i, c)| c[*i]).collect();
            if let Some(ch) = Self::propagate(n, e, &gens, &assign) {
                out.push(ch.reduced());
            }
            // odometer
            let mut k = 0;
            loop {
                if k == idx.len() {
                    out.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
                    out.dedup();
                    return out;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }

    fn propagate(n: i64, e: u64, gens: &[i64], assign: &[u64]) -> Option<Character> {
        let mut exps: Vec<Option<u64>> = vec![None; n as usize];
        exps[(1 % n) as usize] = Some(0);
        let mut queue = VecDeque::from([1 % n]);
        while let Some(x) = queue.pop_front() {
            let ex = exps[x as usize].unwrap();
            for (g, a) in gens.iter().zip(assign) {
                let y = (x * g).rem_euclid(n);
                let ey = (ex + a) % e;
                match exps[y as usize] {
                    None => {
                        exps[y as usize] = Some(ey);
                        queue.push_back(y);
                    }
                    Some(old) if old != ey => return None,
                    _ => {}
                }
            }
        }
        Some(Character { modulus: n, order: e, exps })
    }

    fn reduced(mut self) -> Self {
        let g = self.exps.iter().flatten().fold(self.order, |acc, x| acc.gcd(x));
        let g = g.max(1);
        self.order /= g;
        for x in self.exps.iter_mut().flatten() {
            *x /= g;
        }
        self
    }

    fn sort_key(&self) -> (u64, Vec<u64>) {
        // by order, then by values as fractions of a full turn
        let m = self.order;
        (m, self.exps.iter().flatten().map(|x| x * 1_000_000 / m).collect())
    }

    pub fn modulus(&self) -> i64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// The field containing the values.
    pub fn field(&self) -> ScalarField {
        ScalarField::cyclotomic(self.order)
    }

    /// Exponent e with χ(a) = ζ_m^e, or `None` when gcd(a, N) > 1.
    pub fn exponent(&self, a: i64) -> Option<u64> {
        self.exps[a.rem_euclid(self.modulus) as usize]
    }

    /// χ(a) (zero off the units).
    pub fn value(&self, a: i64) -> Scalar {
        let field = self.field();
        match self.exponent(a) {
            None => field.zero(),
            Some(e) => match &field {
                ScalarField::Cyclotomic(f) => Scalar::from(Cyclo::zeta_pow(f, e as i64)),
                _ => Scalar::from(if e == 0 { 1 } else { -1 }),
            },
        }
    }

    /// χ(−1) as ±1.
    pub fn parity(&self) -> i8 {
        if self.exponent(-1) == Some(0) {
            1
        } else {
            -1
        }
    }

    pub fn conj(&self) -> Self {
        let m = self.order;
        let exps = self.exps.iter().map(|x| x.map(|e| (m - e) % m)).collect();
        Character { modulus: self.modulus, order: m, exps }
    }

    /// χ(ab) = χ(a)χ(b) over the whole table.
    pub fn is_multiplicative(&self) -> bool {
        let n = self.modulus;
        (0..n).all(|a| {
            (0..n).all(|b| match (self.exponent(a), self.exponent(b)) {
                (Some(x), Some(y)) => self.exponent(a * b) == Some((x + y) % self.order),
                _ => self.exponent(a * b).is_none(),
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::euler_phi;

    #[test]
    fn counts_and_multiplicativity() {
        for n in 1..=40i64 {
            let all = Character::all(n);
            assert_eq!(all.len() as u64, euler_phi(n as u64), "N={n}");
            assert!(all[0].is_trivial());
            for c in &all {
                assert!(c.is_multiplicative());
                assert!(all.contains(&c.conj()));
            }
        }
    }

    #[test]
    fn mod5_has_order_four_characters() {
        let all = Character::all(5);
        let orders: Vec<u64> = all.iter().map(|c| c.order()).collect();
        assert_eq!(orders, vec![1, 2, 4, 4]);
        assert_eq!(all[1].parity(), 1);
        assert_eq!(all[2].parity(), -1);
    }
}
