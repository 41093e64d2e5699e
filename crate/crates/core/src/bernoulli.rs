//! Exact Bernoulli numbers and polynomials (B_1 = -1/2 convention), binomial
//! coefficients, and signed Stirling numbers of the first kind. These are the
//! oracles behind the regularized Bernoulli measure and its moments.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// C(n, k) as a big integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// B_0, ..., B_n by the defining recurrence sum_{j<=m} C(m+1,j) B_j = 0.
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(BigRational::one());
            continue;
        }
        let mut acc = BigRational::zero();
        for (j, bj) in b.iter().enumerate() {
            acc += BigRational::from_integer(binomial(m as u64 + 1, j as u64)) * bj;
        }
        b.push(-acc / BigRational::from_integer(BigInt::from(m as u64 + 1)));
    }
    b
}

/// Coefficients (ascending) of the Bernoulli polynomial
/// B_k(x) = sum_j C(k,j) B_j x^(k-j).
pub fn bernoulli_polynomial(k: usize) -> Vec<BigRational> {
    let b = bernoulli_numbers(k);
    let mut coeffs = vec![BigRational::zero(); k + 1];
    for (j, bj) in b.iter().enumerate() {
        // x-power k - j gets coefficient C(k,j) B_j.
        coeffs[k - j] = BigRational::from_integer(binomial(k as u64, j as u64)) * bj;
    }
    coeffs
}

/// Evaluates an ascending-coefficient polynomial at a rational point.
pub fn eval_poly(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut out = BigRational::zero();
    for c in coeffs.iter().rev() {
        out = out * x + c;
    }
    out
}

/// Signed Stirling numbers of the first kind s(k, j) for 0 <= j <= k:
/// x(x-1)...(x-k+1) = sum_j s(k,j) x^j.
pub fn stirling_first(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for m in 0..k {
        let mut next = vec![BigInt::zero(); row.len() + 1];
        for (j, c) in row.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= BigInt::from(m as u64) * c;
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bernoulli_number_table() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], q(1, 1));
        assert_eq!(b[1], q(-1, 2));
        assert_eq!(b[2], q(1, 6));
        assert_eq!(b[3], q(0, 1));
        assert_eq!(b[4], q(-1, 30));
        assert_eq!(b[6], q(1, 42));
        assert_eq!(b[8], q(-1, 30));
        assert_eq!(b[10], q(5, 66));
        assert_eq!(b[12], q(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomial_identities() {
        // B_1(x) = x - 1/2; B_2(x) = x^2 - x + 1/6.
        assert_eq!(bernoulli_polynomial(1), vec![q(-1, 2), q(1, 1)]);
        assert_eq!(bernoulli_polynomial(2), vec![q(1, 6), q(-1, 1), q(1, 1)]);
        // Difference equation B_k(x+1) - B_k(x) = k x^(k-1) at sample points.
        for k in 1..=8usize {
            let bk = bernoulli_polynomial(k);
            for x in [q(0, 1), q(1, 2), q(3, 7), q(-2, 5)] {
                let lhs = eval_poly(&bk, &(x.clone() + q(1, 1))) - eval_poly(&bk, &x);
                let rhs = q(k as i64, 1) * x.pow(k as i32 - 1);
                assert_eq!(lhs, rhs);
            }
        }
        // Multiplication theorem at m=5, k=3: sum_a B_3(a/5) = 5^(-2) B_3.
        let b3 = bernoulli_polynomial(3);
        let mut s = BigRational::zero();
        for a in 0..5i64 {
            s += eval_poly(&b3, &q(a, 5));
        }
        assert_eq!(s, q(0, 1)); // B_3 = 0
        let b2 = bernoulli_polynomial(2);
        let mut s = BigRational::zero();
        for a in 0..5i64 {
            s += eval_poly(&b2, &q(a, 5));
        }
        assert_eq!(s, q(1, 5) * q(1, 6));
    }

    #[test]
    fn stirling_row() {
        // x(x-1)(x-2) = x^3 - 3x^2 + 2x.
        let s = stirling_first(3);
        let as_i64: Vec<i64> = s.iter().map(|c| c.to_string().parse().unwrap()).collect();
        assert_eq!(as_i64, vec![0, 2, -3, 1]);
    }
}
