//! Exact counters. Engines pick `u64` or `u128` when the instance size proves the
//! counts cannot overflow it and `BigUint` otherwise; results always leave
//! the crate as `BigUint`.

use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{One, Zero};

pub(crate) trait Count:
    Clone + Debug + PartialEq + Send + Sync + Zero + One + 'static
{
    fn add_from(&mut self, other: &Self);
    fn mul_by(&self, other: &Self) -> Self;
    fn into_big(self) -> BigUint;
}

macro_rules! word_count {
    ($t:ty) => {
        impl Count for $t {
            #[inline]
            fn add_from(&mut self, other: &Self) {
                *self += *other;
            }
            #[inline]
            fn mul_by(&self, other: &Self) -> Self {
                *self * *other
            }
            fn into_big(self) -> BigUint {
                BigUint::from(self)
            }
        }
    };
}

word_count!(u64);
word_count!(u128);

impl Count for BigUint {
    fn add_from(&mut self, other: &Self) {
        *self += other;
    }
    fn mul_by(&self, other: &Self) -> Self {
        self * other
    }
    fn into_big(self) -> BigUint {
        self
    }
}

/// Pascal's triangle up to row `n`.
pub(crate) fn binomial_rows<C: Count>(n: usize) -> Vec<Vec<C>> {
    let mut rows: Vec<Vec<C>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![C::one(); i + 1];
        for k in 1..i {
            let mut v = rows[i - 1][k - 1].clone();
            v.add_from(&rows[i - 1][k]);
            row[k] = v;
        }
        rows.push(row);
    }
    rows
}

/// Binomial coefficient as an arbitrary-precision integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pascal_matches_closed_form() {
        let rows = binomial_rows::<u128>(40);
        for (n, row) in rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                assert_eq!(BigUint::from(*v), binomial(n, k), "C({n},{k})");
            }
        }
        assert_eq!(binomial(5, 7), BigUint::zero());
        assert_eq!(binomial(60, 30).to_string(), "118264581564861424");
    }
}
