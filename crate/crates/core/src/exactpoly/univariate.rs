use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{MPoly, PolyError, Rat, Sym};

/// Dense coefficients of `p` in `x` (index = power), or `None` when another
/// symbol occurs.
pub fn as_univariate(p: &MPoly, x: Sym) -> Option<Vec<Rat>> {
    if p.symbols().iter().any(|&s| s != x) {
        return None;
    }
    let coeffs = p.coefficients_in(x);
    if coeffs.is_empty() {
        return Some(vec![Rat::zero()]);
    }
    Some(
        coeffs
            .iter()
            .map(|c| c.as_constant().expect("only x occurs"))
            .collect(),
    )
}

fn primitive_integer_form(c: &[Rat]) -> Vec<BigInt> {
    let lcm = c.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
    let ints: Vec<BigInt> = c.iter().map(|q| (q * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    ints.into_iter().map(|a| a / &g).collect()
}

/// `q^n f(p/q)` for integer coefficients of degree `n`.
fn scaled_value(ints: &[BigInt], p: &BigInt, q: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    let mut qpow = BigInt::one();
    for a in ints.iter().rev() {
        acc = acc * p + a * &qpow;
        qpow *= q;
    }
    acc
}

/// Exact quotient of `f` by `(q x - p)`.
fn deflate_integer(ints: &[BigInt], p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    let n = ints.len() - 1;
    let mut out = vec![BigInt::zero(); n];
    let mut rem = ints.to_vec();
    for i in (0..n).rev() {
        let coef = &rem[i + 1] / q;
        rem[i] += &coef * p;
        out[i] = coef;
    }
    out
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let limit = n.sqrt();
    let mut d = BigInt::one();
    while d <= limit {
        if n.is_multiple_of(&d) {
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
            small.push(d.clone());
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// All rational roots of the polynomial with dense coefficients `coeffs`.
///
/// Candidates come from the rational root theorem on the primitive integer
/// form; each confirmed root is divided out exactly before the next test.
pub fn rational_roots(coeffs: &[Rat]) -> Result<BTreeSet<Rat>, PolyError> {
    let mut c: Vec<Rat> = coeffs.to_vec();
    while c.last().is_some_and(Zero::is_zero) {
        c.pop();
    }
    if c.is_empty() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut roots = BTreeSet::new();
    let zeros = c.iter().take_while(|q| q.is_zero()).count();
    if zeros > 0 {
        roots.insert(Rat::zero());
        c.drain(..zeros);
    }
    if c.len() == 1 {
        return Ok(roots);
    }
    let mut ints = primitive_integer_form(&c);
    let lead_divs = positive_divisors(ints.last().expect("nonempty"));
    let const_divs = positive_divisors(&ints[0]);
    let at_one: BigInt = ints.iter().sum();
    let at_minus_one: BigInt = ints.iter().enumerate().map(|(i, a)| if i % 2 == 0 { a.clone() } else { -a }).sum();

    for num in &const_divs {
        for den in &lead_divs {
            if !num.gcd(den).is_one() {
                continue;
            }
            for num in [num.clone(), -num] {
                // A root p/q forces (q - p) | f(1) and (q + p) | f(-1).
                let (lo, hi) = (den - &num, den + &num);
                if (!lo.is_zero() && !at_one.is_multiple_of(&lo)) || (!hi.is_zero() && !at_minus_one.is_multiple_of(&hi)) {
                    continue;
                }
                while ints.len() > 1 && scaled_value(&ints, &num, den).is_zero() {
                    roots.insert(Rat::new(num.clone(), den.clone()));
                    ints = deflate_integer(&ints, &num, den);
                }
            }
        }
    }
    Ok(roots)
}
