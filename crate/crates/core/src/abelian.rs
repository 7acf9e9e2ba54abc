//! Abelian invariants, integer Smith normal form and the quotient test on
//! bracket lists like `[2,4,16]`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::Error;

/// Orders of the cyclic factors of a finite abelian p-group, ascending.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianInvariants(Vec<u64>);

impl AbelianInvariants {
    /// Builds from any order; entries equal to 1 are dropped.
    pub fn new(mut orders: Vec<u64>) -> Self {
        orders.retain(|&o| o > 1);
        orders.sort_unstable();
        AbelianInvariants(orders)
    }

    pub fn trivial() -> Self {
        AbelianInvariants(Vec::new())
    }

    pub fn orders(&self) -> &[u64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn order(&self) -> u128 {
        self.0.iter().map(|&o| o as u128).product()
    }

    /// True iff a group with invariants `self` is a homomorphic image of one
    /// with invariants `of`.
    pub fn is_quotient_of(&self, of: &AbelianInvariants) -> bool {
        is_quotient(self, of)
    }
}

/// `a` is a quotient of `b`: compare descending, `a[i] | b[i]` position-wise.
pub fn is_quotient(a: &AbelianInvariants, b: &AbelianInvariants) -> bool {
    if a.0.len() > b.0.len() {
        return false;
    }
    a.0.iter().rev().zip(b.0.iter().rev()).all(|(x, y)| y % x == 0)
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, o) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{o}")?;
        }
        write!(f, "]")
    }
}

impl FromStr for AbelianInvariants {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Syntax(format!("invariants must be bracketed: {s:?}")))?;
        let mut v = Vec::new();
        for part in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let o: u64 =
                part.parse().map_err(|_| Error::Syntax(format!("bad invariant {part:?} in {s:?}")))?;
            if o == 0 {
                return Err(Error::Syntax(format!("zero invariant in {s:?}")));
            }
            v.push(o);
        }
        Ok(AbelianInvariants::new(v))
    }
}

impl serde::Serialize for AbelianInvariants {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for AbelianInvariants {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Dense integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut m = IntMat::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            for (c, &v) in row.iter().enumerate() {
                m.data[r * cols + c] = BigInt::from(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    fn at(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.data.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// Diagonal entries of a diagonal form reached by unimodular row and
    /// column operations (not necessarily a divisibility chain).
    pub fn diagonalize(&self) -> Vec<BigInt> {
        let mut m = self.clone();
        let mut diag = Vec::new();
        let mut t = 0;
        while t < m.rows && t < m.cols {
            // pivot on the smallest nonzero absolute value
            let mut best: Option<(usize, usize)> = None;
            for r in t..m.rows {
                for c in t..m.cols {
                    let v = m.get(r, c);
                    if !v.is_zero() && best.map_or(true, |(br, bc)| v.abs() < m.get(br, bc).abs()) {
                        best = Some((r, c));
                    }
                }
            }
            let Some((br, bc)) = best else { break };
            m.swap_rows(t, br);
            m.swap_cols(t, bc);
            let mut clean = true;
            let piv = m.get(t, t).clone();
            for r in t + 1..m.rows {
                if m.get(r, t).is_zero() {
                    continue;
                }
                let q = m.get(r, t).div_floor(&piv);
                for c in t..m.cols {
                    let delta = &q * m.get(t, c);
                    *m.at(r, c) -= delta;
                }
                if !m.get(r, t).is_zero() {
                    clean = false;
                }
            }
            for c in t + 1..m.cols {
                if m.get(t, c).is_zero() {
                    continue;
                }
                let q = m.get(t, c).div_floor(&piv);
                for r in t..m.rows {
                    let delta = &q * m.get(r, t);
                    *m.at(r, c) -= delta;
                }
                if !m.get(t, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                diag.push(m.get(t, t).abs());
                t += 1;
            }
        }
        diag
    }
}

fn p_part(v: &BigInt, p: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut x = v.clone();
    let mut out = 1u64;
    while (&x % &pb).is_zero() {
        x /= &pb;
        out *= p;
    }
    out
}

/// Abelian invariants of the p-part of the cokernel `Z^cols / rowspace(M)`.
pub fn smith_invariants(m: &IntMat, p: u64) -> Result<AbelianInvariants, Error> {
    let diag = m.diagonalize();
    if diag.len() < m.cols() {
        return Err(Error::InfiniteCokernel { rank: diag.len(), cols: m.cols() });
    }
    Ok(AbelianInvariants::new(diag.iter().map(|d| p_part(d, p)).collect()))
}

/// Cokernel invariants for a relation matrix known to present a p-group of
/// order at most `p^max_log`, computed by elimination modulo `p^(max_log+1)`.
///
/// Working modulo that power is exact: the row space contains
/// `p^max_log Z^cols`, so nothing is lost by reducing entries.
pub fn local_invariants(rows: &[Vec<i64>], cols: usize, p: u64, max_log: u32) -> Result<AbelianInvariants, Error> {
    let modulus: u128 = (p as u128).pow(max_log + 1);
    let reduce = |x: i128| -> u128 { x.rem_euclid(modulus as i128) as u128 };
    let mut m: Vec<Vec<u128>> =
        rows.iter().map(|r| r.iter().map(|&x| reduce(x as i128)).collect()).collect();
    let val = |x: u128| -> u32 {
        if x == 0 {
            u32::MAX
        } else {
            let (mut x, mut v) = (x, 0);
            while x % p as u128 == 0 {
                x /= p as u128;
                v += 1;
            }
            v
        }
    };
    let mut out = Vec::new();
    let nrows = m.len();
    let mut t = 0;
    while t < cols {
        let mut best: Option<(usize, usize, u32)> = None;
        for (r, row) in m.iter().enumerate().skip(t) {
            for c in t..cols {
                let v = val(row[c]);
                if v != u32::MAX && best.map_or(true, |b| v < b.2) {
                    best = Some((r, c, v));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((br, bc, v)) = best else {
            return Err(Error::InfiniteCokernel { rank: t, cols });
        };
        if t >= nrows {
            break;
        }
        m.swap(t, br);
        for row in m.iter_mut() {
            row.swap(t, bc);
        }
        // scale pivot row so the pivot is exactly p^v
        let pv = (p as u128).pow(v);
        let unit = m[t][t] / pv;
        let uinv = inv_mod_u128(unit % modulus, modulus);
        for c in t..cols {
            m[t][c] = mulmod(m[t][c], uinv, modulus);
        }
        let pivot_row = m[t].clone();
        for r in 0..nrows {
            if r == t || m[r][t] == 0 {
                continue;
            }
            let q = m[r][t] / pv;
            for c in t..cols {
                m[r][c] = (m[r][c] + modulus - mulmod(q, pivot_row[c], modulus)) % modulus;
            }
        }
        // pivot column cleared; the row can be cleared without touching
        // anything else because column ops against the pivot only add
        // multiples of the pivot column, which is now zero off-diagonal
        for c in t + 1..cols {
            m[t][c] = 0;
        }
        if v > max_log {
            return Err(Error::InfiniteCokernel { rank: t, cols });
        }
        out.push((p as u64).pow(v));
        t += 1;
    }
    Ok(AbelianInvariants::new(out))
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // moduli here are below 2^64
    (a % m) * (b % m) % m
}

fn inv_mod_u128(a: u128, m: u128) -> u128 {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u128
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inv(v: &[u64]) -> AbelianInvariants {
        AbelianInvariants::new(v.to_vec())
    }

    #[test]
    fn diagonal_inputs() {
        let m = IntMat::from_rows(2, &[vec![2, 0], vec![0, 4]]);
        assert_eq!(smith_invariants(&m, 2).unwrap(), inv(&[2, 4]));
        let m = IntMat::from_rows(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 8]]);
        assert_eq!(smith_invariants(&m, 2).unwrap(), inv(&[8]));
    }

    #[test]
    fn infinite_cokernel_reported() {
        let m = IntMat::from_rows(2, &[vec![2, 0]]);
        assert!(matches!(smith_invariants(&m, 2), Err(Error::InfiniteCokernel { .. })));
    }

    #[test]
    fn non_chain_diagonal_keeps_p_part() {
        // Z/6 x Z/4: 2-part is [2,4]
        let m = IntMat::from_rows(2, &[vec![6, 0], vec![0, 4]]);
        assert_eq!(smith_invariants(&m, 2).unwrap(), inv(&[2, 4]));
    }

    #[test]
    fn local_matches_bigint() {
        let rows = vec![vec![2, 4, 0], vec![0, 8, 2], vec![4, 0, 4], vec![2, 2, 2]];
        let m = IntMat::from_rows(3, &rows);
        let a = smith_invariants(&m, 2).unwrap();
        let b = local_invariants(&rows, 3, 2, 10).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_examples() {
        assert!(is_quotient(&inv(&[2, 4]), &inv(&[4, 4])));
        assert!(!is_quotient(&inv(&[2, 2, 8]), &inv(&[4, 8])));
        assert!(is_quotient(&inv(&[4, 4, 8]), &inv(&[4, 4, 8])));
        assert!(is_quotient(&inv(&[]), &inv(&[2])));
        assert!(!is_quotient(&inv(&[8]), &inv(&[4, 4])));
    }

    #[test]
    fn display_and_parse() {
        let a: AbelianInvariants = "[2, 16,4]".parse().unwrap();
        assert_eq!(a.to_string(), "[2,4,16]");
        assert_eq!("[]".parse::<AbelianInvariants>().unwrap(), AbelianInvariants::trivial());
        assert!("2,4".parse::<AbelianInvariants>().is_err());
    }
}
