//! Exact LLL reduction of integer row bases (δ = 3/4), in the all-integer
//! formulation: `d[i]` are Gram determinants and `lam[k][j] = d[j+1]·μ_kj`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `n / d` for `d > 0`, halves rounded up.
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    (n * BigInt::from(2) + d).div_floor(&(d * BigInt::from(2)))
}

struct State {
    /// `d[0] = 1`, `d[i + 1]` is the Gram determinant of rows `0..=i`.
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

impl State {
    /// Size-reduce row `k` against row `l`.
    fn reduce(&mut self, b: &mut [Vec<BigInt>], k: usize, l: usize) {
        let dl = &self.d[l + 1];
        if (&self.lam[k][l] * BigInt::from(2)).abs() <= *dl {
            return;
        }
        let q = round_div(&self.lam[k][l], dl);
        let bl = b[l].clone();
        for (x, y) in b[k].iter_mut().zip(&bl) {
            *x -= &q * y;
        }
        self.lam[k][l] -= &q * dl;
        for i in 0..l {
            let v = &q * &self.lam[l][i];
            self.lam[k][i] -= v;
        }
    }

    /// Exchange rows `k - 1` and `k`, updating the integral Gram-Schmidt data.
    fn swap(&mut self, b: &mut [Vec<BigInt>], k: usize, kmax: usize) {
        b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lam[k][j]);
            self.lam[k][j] = std::mem::replace(&mut self.lam[k - 1][j], t);
        }
        let lam = self.lam[k][k - 1].clone();
        let (dkm2, dkm1, dk) = (&self.d[k - 1], &self.d[k], &self.d[k + 1]);
        let big_b = (dkm2 * dk + &lam * &lam) / dkm1;
        for i in k + 1..=kmax {
            let t = self.lam[i][k].clone();
            let new_ik = (dk * &self.lam[i][k - 1] - &lam * &t) / dkm1;
            let new_ikm1 = (&big_b * &t + &lam * &new_ik) / dk;
            self.lam[i][k] = new_ik;
            self.lam[i][k - 1] = new_ikm1;
        }
        self.d[k] = big_b;
    }
}

/// LLL-reduce the rows of `b` in place. Rows must be linearly independent.
pub fn lll(b: &mut [Vec<BigInt>]) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let mut st = State { d: vec![BigInt::zero(); n + 1], lam: vec![vec![BigInt::zero(); n]; n] };
    st.d[0] = BigInt::from(1);
    st.d[1] = dot(&b[0], &b[0]);
    let mut k = 1;
    let mut kmax = 0;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&st.d[i + 1] * &u - &st.lam[k][i] * &st.lam[j][i]) / &st.d[i];
                }
                if j < k {
                    st.lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "LLL input rows are linearly dependent");
                    st.d[k + 1] = u;
                }
            }
        }
        st.reduce(b, k, k - 1);
        let lam = &st.lam[k][k - 1];
        let lhs: BigInt = &st.d[k + 1] * &st.d[k - 1] * 4;
        let rhs: BigInt = &st.d[k] * &st.d[k] * 3 - lam * lam * 4;
        if lhs < rhs {
            st.swap(b, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k - 1).rev() {
                st.reduce(b, k, l);
            }
            k += 1;
        }
    }
}

/// Sup norm of an integer vector.
pub fn max_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(BigInt::zero)
}

/// Of `v` and `-v`, the lexicographically smaller.
pub fn canonical_sign(v: Vec<BigInt>) -> Vec<BigInt> {
    let neg: Vec<BigInt> = v.iter().map(|x| -x).collect();
    if neg < v {
        neg
    } else {
        v
    }
}

/// Divide out the gcd of the entries.
pub fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| num_integer::Integer::gcd(&g, x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn reduces_textbook_basis() {
        let mut b = rows(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        lll(&mut b);
        assert_eq!(b, rows(&[&[0, 1, 0], &[1, 0, 1], &[-1, 0, 2]]));
    }

    #[test]
    fn sign_and_content_normalization() {
        let v = primitive(rows(&[&[2, -6]]).remove(0));
        assert_eq!(canonical_sign(v), rows(&[&[-1, 3]]).remove(0));
    }
}
