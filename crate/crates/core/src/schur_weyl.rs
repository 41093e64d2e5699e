//! Polynomial model of the holomorphic differential operators: exact sparse
//! polynomials in the entries of a generic n x n matrix (plus one formal
//! substitution parameter), leading principal minors of the diagonal blocks,
//! the product polynomials p(rtilde, stilde), symbolic highest-weight
//! verification, and the degree decomposition count.

use crate::bernoulli::binomial;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse exact-rational polynomial in the n^2 matrix entries x_{ij} and one
/// formal parameter t. Exponent vectors have length n^2 + 1 with t last.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPoly {
    n: usize,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl MatrixPoly {
    fn nvars(n: usize) -> usize {
        n * n + 1
    }

    pub fn zero(n: usize) -> Self {
        MatrixPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u16; Self::nvars(n)], c);
        }
        MatrixPoly { n, terms }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, BigRational::one())
    }

    /// The matrix entry x_{ij} (0-based indices).
    pub fn var(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n);
        let mut e = vec![0u16; Self::nvars(n)];
        e[i * n + j] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MatrixPoly { n, terms }
    }

    /// The formal parameter t.
    pub fn param(n: usize) -> Self {
        let mut e = vec![0u16; Self::nvars(n)];
        *e.last_mut().unwrap() = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        MatrixPoly { n, terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        MatrixPoly { n: self.n, terms }
    }

    pub fn neg(&self) -> Self {
        MatrixPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let mut terms: BTreeMap<Vec<u16>, BigRational> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let entry = terms.entry(e).or_insert_with(BigRational::zero);
                *entry += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MatrixPoly { n: self.n, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        MatrixPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k * c)).collect(),
        }
    }

    /// Total degree in the matrix variables (the parameter t not counted).
    pub fn matrix_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e[..e.len() - 1].iter().map(|&x| x as u32).sum())
            .max()
    }

    /// True iff every monomial has matrix-variable degree d.
    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms
            .keys()
            .all(|e| e[..e.len() - 1].iter().map(|&x| x as u32).sum::<u32>() == d)
    }

    /// Substitutes each matrix entry by the polynomial subs[i][j]; the
    /// parameter t maps to itself.
    pub fn substitute(&self, subs: &[Vec<MatrixPoly>]) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut term = Self::constant(n, c.clone());
            for i in 0..n {
                for j in 0..n {
                    let k = e[i * n + j];
                    if k > 0 {
                        term = term.mul(&subs[i][j].pow(k as u32));
                    }
                }
            }
            let tk = *e.last().unwrap();
            if tk > 0 {
                term = term.mul(&Self::param(n).pow(tk as u32));
            }
            out = out.add(&term);
        }
        out
    }
}

impl fmt::Display for MatrixPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = Vec::new();
            for i in 0..self.n {
                for j in 0..self.n {
                    let k = e[i * self.n + j];
                    if k == 1 {
                        pieces.push(format!("x{}{}", i + 1, j + 1));
                    } else if k > 1 {
                        pieces.push(format!("x{}{}^{}", i + 1, j + 1, k));
                    }
                }
            }
            let tk = *e.last().unwrap();
            if tk == 1 {
                pieces.push("t".into());
            } else if tk > 1 {
                pieces.push(format!("t^{tk}"));
            }
            if pieces.is_empty() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "{}", pieces.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Determinant of a square matrix of polynomials by cofactor expansion.
pub fn determinant(m: &[Vec<MatrixPoly>]) -> MatrixPoly {
    let k = m.len();
    let n = if k == 0 { 1 } else { m[0][0].n() };
    if k == 0 {
        return MatrixPoly::one(n);
    }
    if k == 1 {
        return m[0][0].clone();
    }
    let mut out = MatrixPoly::zero(n);
    for col in 0..k {
        let minor: Vec<Vec<MatrixPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let cof = m[0][col].mul(&determinant(&minor));
        out = if col % 2 == 0 { out.add(&cof) } else { out.sub(&cof) };
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    A,
    D,
}

/// Leading principal i x i minor of the named diagonal block of the (a, b)
/// split of the generic n x n matrix (Delta_i for A, Delta'_j for D).
pub fn leading_minor(a: usize, b: usize, block: Block, i: usize) -> Result<MatrixPoly> {
    let n = a + b;
    let (offset, size) = match block {
        Block::A => (0usize, a),
        Block::D => (a, b),
    };
    if i == 0 || i > size {
        return Err(Error::Domain(format!("minor index {i} out of range for block of size {size}")));
    }
    let m: Vec<Vec<MatrixPoly>> = (0..i)
        .map(|r| (0..i).map(|c| MatrixPoly::var(n, offset + r, offset + c)).collect())
        .collect();
    Ok(determinant(&m))
}

/// p(rtilde, stilde) = prod_i Delta_i^{rtilde_i} * prod_j Delta'_j^{stilde_j},
/// homogeneous of degree sum i*rtilde_i + sum j*stilde_j.
pub fn p_polynomial(a: usize, b: usize, rtilde: &[u32], stilde: &[u32]) -> Result<MatrixPoly> {
    if rtilde.len() != a || stilde.len() != b {
        return Err(Error::Schema("exponent lists must match the block sizes".into()));
    }
    let n = a + b;
    let mut out = MatrixPoly::one(n);
    for (i, &e) in rtilde.iter().enumerate() {
        if e > 0 {
            out = out.mul(&leading_minor(a, b, Block::A, i + 1)?.pow(e));
        }
    }
    for (j, &e) in stilde.iter().enumerate() {
        if e > 0 {
            out = out.mul(&leading_minor(a, b, Block::D, j + 1)?.pow(e));
        }
    }
    Ok(out)
}

/// Declared degree d = sum i*rtilde_i + sum j*stilde_j.
pub fn p_polynomial_degree(rtilde: &[u32], stilde: &[u32]) -> u32 {
    rtilde.iter().enumerate().map(|(i, e)| (i as u32 + 1) * e).sum::<u32>()
        + stilde.iter().enumerate().map(|(j, e)| (j as u32 + 1) * e).sum::<u32>()
}

fn identity_subs(n: usize) -> Vec<Vec<MatrixPoly>> {
    (0..n)
        .map(|i| (0..n).map(|j| MatrixPoly::var(n, i, j)).collect())
        .collect()
}

/// Substitution X -> M X where M acts on rows: row r of the result is
/// sum_k M[r][k] * row k. M entries are scalars (constants or t-terms).
fn left_multiply_subs(n: usize, m: &[Vec<MatrixPoly>]) -> Vec<Vec<MatrixPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = MatrixPoly::zero(n);
                    for k in 0..n {
                        acc = acc.add(&m[i][k].mul(&MatrixPoly::var(n, k, j)));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Substitution X -> X M acting on columns.
fn right_multiply_subs(n: usize, m: &[Vec<MatrixPoly>]) -> Vec<Vec<MatrixPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = MatrixPoly::zero(n);
                    for k in 0..n {
                        acc = acc.add(&MatrixPoly::var(n, i, k).mul(&m[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn elementary(n: usize, i: usize, j: usize, sign: i64) -> Vec<Vec<MatrixPoly>> {
    let mut m = identity_matrix(n);
    let t = MatrixPoly::param(n).scale(&BigRational::from_integer(BigInt::from(sign)));
    m[i][j] = m[i][j].add(&t);
    m
}

fn identity_matrix(n: usize) -> Vec<Vec<MatrixPoly>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { MatrixPoly::one(n) } else { MatrixPoly::zero(n) })
                .collect()
        })
        .collect()
}

/// Verifies that P spans a highest-weight line of weight mu for the pair
/// action P(X) -> P(transpose(g1)^{-1} X g2) on u x u matrices (restricted to
/// rows/columns [lo, lo+size) when checking one diagonal block):
/// (a) invariance under every elementary lower-unipotent g1 and
/// upper-unipotent g2, checked by exact substitution with one formal
/// parameter; (b) the torus pair acts by prod t_i^{-mu_i} prod u_i^{mu_i},
/// checked by row/column scalings.
pub fn highest_weight_verify(p: &MatrixPoly, mu: &[i64], u: usize) -> Result<bool> {
    highest_weight_verify_block(p, mu, 0, u)
}

/// Blockwise variant: the action is restricted to the size x size diagonal
/// block starting at row/column lo of the ambient matrix.
pub fn highest_weight_verify_block(
    p: &MatrixPoly,
    mu: &[i64],
    lo: usize,
    size: usize,
) -> Result<bool> {
    let n = p.n();
    if mu.len() != size || lo + size > n {
        return Err(Error::Schema("weight length must match the block size".into()));
    }
    let total: i64 = mu.iter().sum();
    let block_degree = |e: &Vec<u16>| -> u32 {
        let mut d = 0u32;
        for r in lo..lo + size {
            for c in lo..lo + size {
                d += e[r * n + c] as u32;
            }
        }
        d
    };
    if total < 0 || !p.terms.keys().all(|e| block_degree(e) == total as u32) {
        return Err(Error::Domain(format!(
            "polynomial is not homogeneous of degree |mu| = {total} in the block variables"
        )));
    }
    // (a) unipotent invariance: X -> X g2 with g2 = I + t E_{ij} upper
    // (columns: col j += t col i, i < j), and X -> g X with g lower-unipotent
    // I + t E_{ji} (rows: row j += t row i). These are the operations that
    // fix every leading principal minor of the block.
    for i in lo..lo + size {
        for j in (i + 1)..lo + size {
            let right = right_multiply_subs(n, &elementary(n, i, j, 1));
            if p.substitute(&right) != *p {
                return Ok(false);
            }
            let left = left_multiply_subs(n, &elementary(n, j, i, 1));
            if p.substitute(&left) != *p {
                return Ok(false);
            }
        }
    }
    // (b) torus weights: scaling row k (resp. column k) of the block by t
    // must multiply P by t^{mu_k}.
    let t = MatrixPoly::param(n);
    for (k, &m) in mu.iter().enumerate() {
        if m < 0 {
            return Ok(false);
        }
        let expect = p.mul(&t.pow(m as u32));
        let mut row_scale = identity_subs(n);
        for col in 0..n {
            row_scale[lo + k][col] = MatrixPoly::var(n, lo + k, col).mul(&t);
        }
        if p.substitute(&row_scale) != expect {
            return Ok(false);
        }
        let mut col_scale = identity_subs(n);
        for row in 0..n {
            col_scale[row][lo + k] = MatrixPoly::var(n, row, lo + k).mul(&t);
        }
        if p.substitute(&col_scale) != expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The highest weight carried by p(rtilde, stilde) on the A block:
/// mu_i = sum_{k >= i} rtilde_k (and the same formula on the D block).
pub fn block_weight(exponents: &[u32]) -> Vec<i64> {
    let mut out = vec![0i64; exponents.len()];
    let mut acc = 0i64;
    for (i, &e) in exponents.iter().enumerate().rev() {
        acc += e as i64;
        out[i] = acc;
    }
    out
}

/// All partitions of d with at most u parts (descending, padded with zeros).
pub fn partitions(d: u32, u: usize) -> Vec<Vec<u32>> {
    fn go(rem: u32, max: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            let mut v = cur.clone();
            v.resize(cur.len() + slots, 0);
            out.push(v);
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = rem.min(max);
        for k in (1..=hi).rev() {
            cur.push(k);
            go(rem - k, k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    go(d, d, u, &mut cur, &mut out);
    // Strip over-long results (cannot occur) and pad exact length u.
    out.into_iter()
        .map(|mut v| {
            v.resize(u, 0);
            v
        })
        .collect()
}

/// Weyl dimension of the GL_u representation with highest weight mu:
/// prod_{i<j} (mu_i - mu_j + j - i)/(j - i).
pub fn weyl_dimension(mu: &[u32], u: usize) -> BigRational {
    let mut num = BigRational::one();
    for i in 0..u {
        for j in (i + 1)..u {
            let mi = *mu.get(i).unwrap_or(&0) as i64;
            let mj = *mu.get(j).unwrap_or(&0) as i64;
            let term = BigRational::new(
                BigInt::from(mi - mj + (j as i64 - i as i64)),
                BigInt::from(j as i64 - i as i64),
            );
            num *= term;
        }
    }
    num
}

/// Checks sum over partitions mu of d with <= u parts of (dim F^mu)^2
/// against the monomial count C(u^2 + d - 1, d).
pub fn degree_decomposition_check(u: usize, d: u32) -> bool {
    let mut lhs = BigRational::zero();
    for mu in partitions(d, u) {
        let dim = weyl_dimension(&mu, u);
        lhs += &dim * &dim;
    }
    let rhs = BigRational::from_integer(binomial((u * u) as u64 + d as u64 - 1, d as u64));
    lhs == rhs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn minors_small_cases() {
        // n=2, a=b=1: Delta_1 = x11, Delta'_1 = x22.
        assert_eq!(leading_minor(1, 1, Block::A, 1).unwrap(), MatrixPoly::var(2, 0, 0));
        assert_eq!(leading_minor(1, 1, Block::D, 1).unwrap(), MatrixPoly::var(2, 1, 1));
        // n=2, a=2: Delta_2 = x11 x22 - x12 x21.
        let d2 = leading_minor(2, 0, Block::A, 2).unwrap();
        let expect = MatrixPoly::var(2, 0, 0)
            .mul(&MatrixPoly::var(2, 1, 1))
            .sub(&MatrixPoly::var(2, 0, 1).mul(&MatrixPoly::var(2, 1, 0)));
        assert_eq!(d2, expect);
        // Out-of-range index.
        assert!(leading_minor(1, 1, Block::A, 2).is_err());
    }

    #[test]
    fn minor_uses_only_its_block() {
        // n=3, a=2: Delta_2 involves only rows/cols 1-2; independent cofactor
        // oracle over the 2x2 corner of a 3x3 generic matrix.
        let d2 = leading_minor(2, 1, Block::A, 2).unwrap();
        let expect = MatrixPoly::var(3, 0, 0)
            .mul(&MatrixPoly::var(3, 1, 1))
            .sub(&MatrixPoly::var(3, 0, 1).mul(&MatrixPoly::var(3, 1, 0)));
        assert_eq!(d2, expect);
        // D-block minor of the (2,1) split is the corner entry x33.
        assert_eq!(leading_minor(2, 1, Block::D, 1).unwrap(), MatrixPoly::var(3, 2, 2));
    }

    #[test]
    fn p_polynomial_examples() {
        // a=b=1, rtilde=(2), stilde=(1): x11^2 x22.
        let p = p_polynomial(1, 1, &[2], &[1]).unwrap();
        let expect = MatrixPoly::var(2, 0, 0).pow(2).mul(&MatrixPoly::var(2, 1, 1));
        assert_eq!(p, expect);
        assert_eq!(p_polynomial_degree(&[2], &[1]), 3);
        // All exponents zero: constant 1.
        assert_eq!(p_polynomial(1, 1, &[0], &[0]).unwrap(), MatrixPoly::one(2));
        // a=2, rtilde=(0,1): Delta_2.
        let p2 = p_polynomial(2, 0, &[0, 1], &[]).unwrap();
        assert_eq!(p2, leading_minor(2, 0, Block::A, 2).unwrap());
        assert_eq!(p_polynomial_degree(&[0, 1], &[]), 2);
    }

    #[test]
    fn p_polynomial_degree_matches() {
        for (a, b, rt, st) in [
            (2usize, 1usize, vec![1u32, 1], vec![2u32]),
            (1, 2, vec![3], vec![0, 1]),
            (2, 2, vec![0, 2], vec![1, 0]),
        ] {
            let p = p_polynomial(a, b, &rt, &st).unwrap();
            let d = p_polynomial_degree(&rt, &st);
            assert!(p.is_homogeneous_of_degree(d));
            assert_eq!(p.matrix_degree(), Some(d));
        }
    }

    #[test]
    fn highest_weight_examples() {
        // u=2, mu=(1,0), P = x11: true.
        let p = MatrixPoly::var(2, 0, 0);
        assert!(highest_weight_verify(&p, &[1, 0], 2).unwrap());
        // u=2, mu=(1,1), P = det: true.
        let det = leading_minor(2, 0, Block::A, 2).unwrap();
        assert!(highest_weight_verify(&det, &[1, 1], 2).unwrap());
        // P = x12: not unipotent-invariant.
        let bad = MatrixPoly::var(2, 0, 1);
        assert!(!highest_weight_verify(&bad, &[1, 0], 2).unwrap());
        // Non-homogeneous input errors out.
        let mixed = MatrixPoly::var(2, 0, 0).add(&MatrixPoly::one(2));
        assert!(highest_weight_verify(&mixed, &[1, 0], 2).is_err());
    }

    #[test]
    fn p_polynomials_are_highest_weight_vectors() {
        // Blockwise: the A-minor part on M_a and the D-minor part on M_b each
        // span highest-weight lines with mu_i = sum_{k>=i} exponents.
        for (a, b, rt, st) in [
            (1usize, 1usize, vec![2u32], vec![1u32]),
            (2, 1, vec![1, 1], vec![2]),
            (2, 2, vec![0, 1], vec![1, 1]),
            (3, 1, vec![1, 0, 1], vec![0]),
        ] {
            let p = p_polynomial(a, b, &rt, &st).unwrap();
            let mu_a = block_weight(&rt);
            let mu_d = block_weight(&st);
            assert!(
                highest_weight_verify_block(&p, &mu_a, 0, a).unwrap(),
                "A block failed for rt={rt:?} st={st:?}"
            );
            assert!(
                highest_weight_verify_block(&p, &mu_d, a, b).unwrap(),
                "D block failed for rt={rt:?} st={st:?}"
            );
        }
    }

    #[test]
    fn degree_decomposition() {
        // u=2, d=2: 3^2 + 1^2 = 10 = C(5,2).
        let dims: Vec<BigRational> =
            partitions(2, 2).iter().map(|mu| weyl_dimension(mu, 2)).collect();
        assert_eq!(dims, vec![q(3), q(1)]);
        // u=3, d=2: 6^2 + 3^2 = 45 = C(10,2).
        let dims3: Vec<BigRational> =
            partitions(2, 3).iter().map(|mu| weyl_dimension(mu, 3)).collect();
        assert_eq!(dims3, vec![q(6), q(3)]);
        for u in 1..=3usize {
            for d in 0..=4u32 {
                assert!(degree_decomposition_check(u, d), "u={u} d={d}");
            }
        }
    }

    #[test]
    fn canonical_display() {
        let p = MatrixPoly::var(2, 0, 0)
            .pow(2)
            .mul(&MatrixPoly::var(2, 1, 1))
            .sub(&MatrixPoly::var(2, 0, 1).scale(&q(3)));
        let s = format!("{p}");
        assert_eq!(s, "-3*x12 + x11^2*x22");
        // Determinism.
        assert_eq!(s, format!("{p}"));
    }
}
