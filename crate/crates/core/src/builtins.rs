//! Named polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{CoreError, Result};
use crate::parse::parse;
use crate::poly::TracePolynomial;
use crate::scalar::{int, Scalar};
use crate::word::{Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `std(k)`: signed sum over all orderings of `k` variables.
    Standard(usize),
    /// `comm_sq`: `[X1, X2]^2`, central for 2x2 matrices.
    CommutatorSquare,
    /// `friedland_c`: the Gram determinant of the traceless parts of a
    /// pair of 2x2 matrices; nonzero exactly on generating pairs.
    FriedlandC,
    /// `formanek(n)`: Formanek's central polynomial for `n x n` matrices.
    Formanek(usize),
}

pub const BUILTIN_NAMES: &[&str] = &["std(k)", "comm_sq", "friedland_c", "formanek(n)"];

impl Builtin {
    pub fn generators(&self) -> usize {
        match self {
            Builtin::Standard(k) => *k,
            Builtin::CommutatorSquare | Builtin::FriedlandC => 2,
            Builtin::Formanek(n) => n + 1,
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Builtin::Standard(_) => "standard polynomial; std(2n) is an identity of n x n matrices (Amitsur-Levitzki)",
            Builtin::CommutatorSquare => "(X1*X2 - X2*X1)^2; classical degree-4 central polynomial for 2 x 2 matrices",
            Builtin::FriedlandC => {
                "(2tr(X1^2)-tr(X1)^2)(2tr(X2^2)-tr(X2)^2) - (2tr(X1X2)-tr(X1)tr(X2))^2; \
                 nonzero exactly on pairs generating M_2 (Friedland)"
            }
            Builtin::Formanek(_) => {
                "Formanek's central polynomial from G = prod_i (t1-ti)(t_{n+1}-ti) prod_{i<j} (ti-tj)^2, \
                 symmetrized over cyclic shifts of Y1..Yn (Formanek, Razmyslov)"
            }
        }
    }

    pub fn polynomial(&self) -> Result<TracePolynomial> {
        match *self {
            Builtin::Standard(k) => Ok(standard(k)),
            Builtin::CommutatorSquare => parse("[X1, X2]^2", 2, None),
            Builtin::FriedlandC => parse(
                "(2*tr(X1^2) - tr(X1)^2)*(2*tr(X2^2) - tr(X2)^2) - (2*tr(X1*X2) - tr(X1)*tr(X2))^2",
                2,
                None,
            ),
            Builtin::Formanek(n) => {
                if n == 0 {
                    return Err(CoreError::UnknownBuiltin("formanek(0)".into()));
                }
                Ok(formanek_with(n, true))
            }
        }
    }
}

impl FromStr for Builtin {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let unknown = || CoreError::UnknownBuiltin(s.to_string());
        let arg = |prefix: &str| -> Option<usize> {
            s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
        };
        match s {
            "comm_sq" => Ok(Builtin::CommutatorSquare),
            "friedland_c" => Ok(Builtin::FriedlandC),
            _ => {
                if let Some(k) = arg("std") {
                    if k >= 1 && k <= Letter::MAX as usize + 1 {
                        return Ok(Builtin::Standard(k));
                    }
                } else if let Some(n) = arg("formanek") {
                    if n >= 1 && n < Letter::MAX as usize {
                        return Ok(Builtin::Formanek(n));
                    }
                }
                Err(unknown())
            }
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Standard(k) => write!(f, "std({k})"),
            Builtin::CommutatorSquare => write!(f, "comm_sq"),
            Builtin::FriedlandC => write!(f, "friedland_c"),
            Builtin::Formanek(n) => write!(f, "formanek({n})"),
        }
    }
}

pub fn standard(k: usize) -> TracePolynomial {
    let mut terms = Vec::new();
    let mut perm: Vec<usize> = (0..k).collect();
    // Heap's algorithm; every swap flips the sign.
    let mut sign = 1i64;
    let mut counters = vec![0usize; k];
    terms.push((Word::new(perm.iter().map(|&i| i as Letter).collect()), int(sign)));
    let mut i = 1;
    while i < k {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            sign = -sign;
            terms.push((Word::new(perm.iter().map(|&i| i as Letter).collect()), int(sign)));
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    TracePolynomial::from_word_terms(k, terms)
}

type Commutative = BTreeMap<Vec<u32>, BigInt>;

fn comm_mul(a: &Commutative, b: &Commutative) -> Commutative {
    let mut out = Commutative::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *out.entry(e).or_insert_with(BigInt::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `t_i - t_j` in `vars` commuting variables (zero-based).
fn difference(vars: usize, i: usize, j: usize) -> Commutative {
    let mut out = Commutative::new();
    let mut ei = vec![0; vars];
    ei[i] = 1;
    let mut ej = vec![0; vars];
    ej[j] = 1;
    out.insert(ei, BigInt::one());
    out.insert(ej, -BigInt::one());
    out
}

/// With `discriminant = false` the `(t_i - t_j)^2` factors are left out;
/// that variant is only central for `n <= 2`.
pub(crate) fn formanek_with(n: usize, discriminant: bool) -> TracePolynomial {
    let vars = n + 1;
    let mut g = Commutative::new();
    g.insert(vec![0; vars], BigInt::one());
    for i in 1..n {
        g = comm_mul(&g, &difference(vars, 0, i));
        g = comm_mul(&g, &difference(vars, n, i));
    }
    if discriminant {
        for i in 1..n {
            for j in i + 1..n {
                let d = difference(vars, i, j);
                g = comm_mul(&g, &comm_mul(&d, &d));
            }
        }
    }
    // t_1^a1 ... t_(n+1)^a(n+1)  ->  X^a1 Y_1 X^a2 ... Y_n X^a(n+1),
    // with X = X1 and Y_i = X(i+1), then summed over cyclic shifts of the Y's.
    let mut terms = Vec::new();
    for shift in 0..n {
        for (exps, c) in &g {
            let mut letters = Vec::new();
            for (slot, &a) in exps.iter().enumerate() {
                letters.extend(std::iter::repeat_n(0 as Letter, a as usize));
                if slot < n {
                    letters.push((1 + (slot + shift) % n) as Letter);
                }
            }
            terms.push((Word::new(letters), Scalar::from_integer(c.clone())));
        }
    }
    TracePolynomial::from_word_terms(vars, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialKey;

    #[test]
    fn std2_is_the_commutator() {
        assert_eq!(standard(2), parse("X1*X2 - X2*X1", 2, None).unwrap());
    }

    #[test]
    fn std3_signs_match_permutation_parity() {
        let s = standard(3);
        assert_eq!(s.len(), 6);
        for (w, c) in s.word_terms().unwrap() {
            let l = w.letters();
            let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| l[i] > l[j]).count();
            assert_eq!(c, int(if inversions % 2 == 0 { 1 } else { -1 }));
        }
    }

    #[test]
    fn friedland_expansion() {
        // tr(X1)^2 tr(X2)^2 cancels between the two products, leaving five terms.
        let c = Builtin::FriedlandC.polynomial().unwrap();
        assert!(c.is_word_free());
        assert_eq!(c.len(), 5);
        let key = |ws: &[&[usize]]| MonomialKey {
            plain: Word::empty(),
            traces: ws.iter().map(|w| Word::from_one_based(w)).collect(),
        };
        assert_eq!(c.coefficient(&key(&[&[1, 1], &[2, 2]])), int(4));
        assert_eq!(c.coefficient(&key(&[&[1, 2], &[1, 2]])), int(-4));
        assert_eq!(c.coefficient(&key(&[&[1], &[2], &[1, 2]])), int(4));
        assert_eq!(c.coefficient(&key(&[&[1], &[1], &[2, 2]])), int(-2));
        assert_eq!(c.coefficient(&key(&[&[2], &[2], &[1, 1]])), int(-2));
    }

    #[test]
    fn formanek_two_by_hand() {
        // G = (t1 - t2)(t3 - t2) = t1 t3 - t1 t2 - t2 t3 + t2^2
        let f = |y1: usize, y2: usize| {
            format!(
                "X1*X{y1}*X{y2}*X1 - X1*X{y1}*X1*X{y2} - X{y1}*X1*X{y2}*X1 + X{y1}*X1*X1*X{y2}"
            )
        };
        let expected = parse(&format!("{} + {}", f(2, 3), f(3, 2)), 3, None).unwrap();
        assert_eq!(Builtin::Formanek(2).polynomial().unwrap(), expected);
    }

    #[test]
    fn formanek_shape() {
        let f3 = Builtin::Formanek(3).polynomial().unwrap();
        assert_eq!(f3.m(), 4);
        assert!(f3.constant_coefficient().is_zero());
        for (w, _) in f3.word_terms().unwrap() {
            assert_eq!(w.degrees(4), vec![6, 1, 1, 1]);
        }
    }

    #[test]
    fn names_round_trip() {
        for name in ["std(4)", "comm_sq", "friedland_c", "formanek(3)"] {
            assert_eq!(name.parse::<Builtin>().unwrap().to_string(), name);
        }
        assert!("std(0)".parse::<Builtin>().is_err());
        assert!("cube".parse::<Builtin>().is_err());
    }
}
