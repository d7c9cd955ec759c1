use std::cmp::Ordering;
use std::fmt;

use super::Sym;

/// A power product of symbols.
///
/// Stored as a list sorted by [`Sym`] order with strictly positive exponents;
/// the empty list is the unit monomial. `Ord` is graded lexicographic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Mono(Vec<(Sym, u32)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(s: Sym) -> Self {
        Mono(vec![(s, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Sym, u32)>) -> Self {
        let mut out = Mono::one();
        for (s, e) in pairs {
            out = out.mul(&Mono::power(s, e));
        }
        out
    }

    pub fn power(s: Sym, e: u32) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, s: Sym) -> u32 {
        self.0
            .iter()
            .find(|(t, _)| *t == s)
            .map_or(0, |&(_, e)| e)
    }

    pub fn factors(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Mono(out)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut rest = other.0.iter().peekable();
        for &(s, e) in &self.0 {
            match rest.peek() {
                Some(&&(t, f)) if t == s => {
                    rest.next();
                    match e.cmp(&f) {
                        Ordering::Less => return None,
                        Ordering::Equal => {}
                        Ordering::Greater => out.push((s, e - f)),
                    }
                }
                Some(&&(t, _)) if t < s => return None,
                _ => out.push((s, e)),
            }
        }
        if rest.next().is_some() {
            return None;
        }
        Some(Mono(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .filter_map(|&(s, e)| {
                    let f = other.exponent(s);
                    (f > 0).then(|| (s, e.min(f)))
                })
                .collect(),
        )
    }

    /// Removes `s` from the monomial, returning its former exponent.
    pub fn without(&self, s: Sym) -> (Mono, u32) {
        let e = self.exponent(s);
        (Mono(self.0.iter().copied().filter(|(t, _)| *t != s).collect()), e)
    }

    pub fn latex(&self) -> String {
        self.0
            .iter()
            .map(|&(s, e)| {
                if e == 1 {
                    s.latex()
                } else {
                    format!("{}^{{{e}}}", s.latex())
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.0.get(i), other.0.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some(&(a, e)), Some(&(b, f))) => {
                        if a != b {
                            // the earlier symbol is present only on one side
                            return if a < b { Ordering::Greater } else { Ordering::Less };
                        }
                        if e != f {
                            return e.cmp(&f);
                        }
                        i += 1;
                        j += 1;
                    }
                }
            }
        })
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (n, &(s, e)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}
