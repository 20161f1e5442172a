use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::graph::GraphError;
use crate::rational::Rational;

/// Largest coefficient box `(2 * bound + 1)^n` searched exhaustively.
pub const RELATION_SEARCH_LIMIT: u64 = 50_000_000;

/// Searches every integer vector `c` with entries in `[-bound, bound]`, not
/// all zero, for one with `|sum c_i * L_i| <= tol`. The returned relation has
/// its first nonzero coefficient positive.
pub fn has_small_integer_relation(
    lengths: &[Rational],
    bound: u32,
    tol: &Rational,
) -> Result<Option<Vec<i64>>, GraphError> {
    if lengths.is_empty() || bound == 0 {
        return Err(GraphError::TooLarge("need at least one length and bound >= 1".into()));
    }
    let side = 2 * bound as u64 + 1;
    let size = (0..lengths.len()).try_fold(1u64, |acc, _| acc.checked_mul(side));
    if size.is_none_or(|s| s > RELATION_SEARCH_LIMIT) {
        return Err(GraphError::TooLarge(format!(
            "{side}^{} coefficient vectors (limit {RELATION_SEARCH_LIMIT})",
            lengths.len()
        )));
    }
    let b = bound as i64;
    match scaled_integers(lengths, tol, bound) {
        Some((ints, tol_int)) => {
            let mut coeffs = vec![0i64; ints.len()];
            Ok(search(&ints, tol_int, b, 0, 0, false, &mut coeffs))
        }
        None => {
            let mut coeffs = vec![0i64; lengths.len()];
            Ok(search_rational(
                lengths,
                tol,
                b,
                0,
                Rational::zero(),
                false,
                &mut coeffs,
            ))
        }
    }
}

/// Lengths and tolerance over a common denominator, when every partial sum
/// fits in an `i128`.
fn scaled_integers(lengths: &[Rational], tol: &Rational, bound: u32) -> Option<(Vec<i128>, i128)> {
    let mut denom = BigInt::one();
    for l in lengths.iter().chain(std::iter::once(tol)) {
        denom = denom.lcm(&l.numer_denom().1);
    }
    let scale = |r: &Rational| -> Option<i128> {
        let (n, d) = r.numer_denom();
        (n * (&denom / d)).to_i128()
    };
    let ints: Vec<i128> = lengths.iter().map(scale).collect::<Option<_>>()?;
    let tol_int = scale(tol)?;
    let worst: BigInt =
        ints.iter().map(|x| BigInt::from(*x).abs() * bound).sum::<BigInt>() + BigInt::from(tol_int).abs();
    worst.to_i128()?.checked_mul(2)?;
    Some((ints, tol_int))
}

fn search(
    values: &[i128],
    tol: i128,
    bound: i64,
    i: usize,
    partial: i128,
    nonzero: bool,
    coeffs: &mut Vec<i64>,
) -> Option<Vec<i64>> {
    if i == values.len() {
        return (nonzero && partial.abs() <= tol).then(|| coeffs.clone());
    }
    // before the first nonzero entry only nonnegative values are tried
    let low = if nonzero { -bound } else { 0 };
    for c in low..=bound {
        coeffs[i] = c;
        let next = partial + c as i128 * values[i];
        if let Some(found) = search(values, tol, bound, i + 1, next, nonzero || c != 0, coeffs) {
            return Some(found);
        }
    }
    coeffs[i] = 0;
    None
}

fn search_rational(
    values: &[Rational],
    tol: &Rational,
    bound: i64,
    i: usize,
    partial: Rational,
    nonzero: bool,
    coeffs: &mut Vec<i64>,
) -> Option<Vec<i64>> {
    if i == values.len() {
        return (nonzero && partial.abs() <= *tol).then(|| coeffs.clone());
    }
    let low = if nonzero { -bound } else { 0 };
    for c in low..=bound {
        coeffs[i] = c;
        let next = &partial + &(&values[i] * &Rational::from_integer(c));
        if let Some(found) = search_rational(values, tol, bound, i + 1, next, nonzero || c != 0, coeffs) {
            return Some(found);
        }
    }
    coeffs[i] = 0;
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn brute(lengths: &[f64], bound: i64, tol: f64) -> bool {
        let n = lengths.len();
        let side = (2 * bound + 1) as usize;
        (1..side.pow(n as u32)).any(|mut code| {
            let mut s = 0.0;
            let mut any = false;
            for l in lengths {
                let c = (code % side) as i64 - bound;
                code /= side;
                any |= c != 0;
                s += c as f64 * l;
            }
            any && s.abs() <= tol
        })
    }

    #[test]
    fn one_two_three() {
        let r = has_small_integer_relation(&[q("1"), q("2"), q("3")], 1, &q("0")).unwrap();
        assert_eq!(r, Some(vec![1, 1, -1]));
    }

    #[test]
    fn repeated_length() {
        let l = q("7/3");
        let r = has_small_integer_relation(&[l.clone(), l], 1, &q("0")).unwrap();
        assert_eq!(r, Some(vec![1, -1]));
    }

    #[test]
    fn golden_ratio_and_e() {
        let lengths = [q("1"), q("1.6180339887"), q("2.7182818284")];
        let r = has_small_integer_relation(&lengths, 10, &q("1e-6")).unwrap();
        assert_eq!(r, None);
        let floats: Vec<f64> = lengths.iter().map(Rational::to_f64).collect();
        assert!(!brute(&floats, 10, 1e-6));
    }

    #[test]
    fn tolerance_admits_near_relations() {
        let lengths = [q("1"), q("1.0000001")];
        assert_eq!(has_small_integer_relation(&lengths, 1, &q("0")).unwrap(), None);
        assert_eq!(
            has_small_integer_relation(&lengths, 1, &q("1e-6")).unwrap(),
            Some(vec![1, -1])
        );
    }

    #[test]
    fn guard() {
        let lengths = vec![q("1"); 20];
        assert!(matches!(
            has_small_integer_relation(&lengths, 5, &q("0")),
            Err(GraphError::TooLarge(_))
        ));
    }

    #[test]
    fn huge_denominators_use_the_exact_fallback() {
        let a = Rational::from_big(num_rational::BigRational::new(1.into(), BigInt::from(3).pow(90)));
        let r = has_small_integer_relation(&[a.clone(), &a + &a], 2, &q("0")).unwrap();
        assert_eq!(r, Some(vec![2, -1]));
    }
}
