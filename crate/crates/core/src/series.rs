//! Truncated univariate power series `f(u) = a_0 + a_1 u + ...` with exact
//! rational coefficients.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in `u` standing for a power series truncated at its degree.
///
/// Coefficients are stored from degree 0 upward with trailing zeros removed,
/// but always at least through degree 1, so `coeff(1)` is the linear term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolySeries {
    coeffs: Vec<BigRational>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl PolySeries {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 2 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        while coeffs.len() < 2 {
            coeffs.push(BigRational::zero());
        }
        PolySeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// The identity series `u`.
    pub fn identity() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `u + u^k`, the shape most table rows use.
    pub fn u_plus_powers(powers: &[usize]) -> Self {
        let top = powers.iter().copied().max().unwrap_or(1).max(1);
        let mut c = vec![BigRational::zero(); top + 1];
        c[1] = BigRational::one();
        for &k in powers {
            c[k] += BigRational::one();
        }
        Self::new(c)
    }

    /// `exp(u) - 1` truncated at degree `d`.
    pub fn exp_minus_one(d: usize) -> Self {
        let mut c = vec![BigRational::zero(); d.max(1) + 1];
        let mut fact = BigInt::one();
        for (k, slot) in c.iter_mut().enumerate().skip(1) {
            fact *= BigInt::from(k);
            *slot = BigRational::new(BigInt::one(), fact.clone());
        }
        Self::new(c)
    }

    /// `log(1 + u) = u - u^2/2 + u^3/3 - ...` truncated at degree `d`.
    pub fn log_one_plus(d: usize) -> Self {
        let mut c = vec![BigRational::zero(); d.max(1) + 1];
        for (k, slot) in c.iter_mut().enumerate().skip(1) {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            *slot = rat(sign, k as i64);
        }
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Coefficient of `u^k`, zero past the stored degree.
    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Highest stored degree (at least 1).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.coeffs[1].is_zero()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn truncate(&self, d: usize) -> Self {
        Self::new(self.coeffs.iter().take(d + 1).cloned().collect())
    }

    /// Canonical representative with `f(0) = 0`, `f'(0) = 1`, truncated at `d`.
    ///
    /// Neither the constant term nor an overall scalar changes the filtration,
    /// and terms above the maximal vertex degree never reach the generators.
    pub fn normalize(&self, d: usize) -> Result<Self> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        let lead = self.coeffs[1].clone();
        let mut c: Vec<BigRational> = self
            .coeffs
            .iter()
            .take(d.max(1) + 1)
            .map(|a| a / &lead)
            .collect();
        c[0] = BigRational::zero();
        Ok(Self::new(c))
    }

    /// Product truncated at degree `d`.
    pub fn mul_truncated(&self, other: &Self, d: usize) -> Self {
        let mut out = vec![BigRational::zero(); d + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(d + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(d + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// `self ∘ inner` truncated at degree `d`; requires `inner(0) = 0`.
    pub fn compose(&self, inner: &Self, d: usize) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        // Horner: a_n, then acc * inner + a_{n-1}, ...
        let mut acc = Self::new(vec![BigRational::zero()]);
        for a in self.coeffs.iter().take(d + 1).rev() {
            acc = acc.mul_truncated(inner, d);
            acc.coeffs[0] += a;
        }
        Ok(acc)
    }

    /// The series `g` with `f(g(u)) = u mod u^{d+1}`, solved one coefficient at
    /// a time: the coefficient of `u^j` in `f(g)` is `a_1 b_j` plus terms that
    /// only involve `b_1..b_{j-1}`.
    pub fn compositional_inverse(&self, d: usize) -> Result<Self> {
        if !self.is_nondegenerate() {
            return Err(Error::Degenerate);
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let d = d.max(1);
        let a1 = self.coeffs[1].clone();
        let mut g = vec![BigRational::zero(); d + 1];
        g[1] = a1.recip();
        for j in 2..=d {
            let partial = self.compose(&Self::new(g.clone()), j)?;
            g[j] = -partial.coeff(j) / &a1;
        }
        Ok(Self::new(g))
    }

    /// The action `f(u) ↦ f(εu)/ε`, i.e. `a_k ↦ ε^{k-1} a_k`.
    pub fn scale_action(&self, eps: &BigRational) -> Result<Self> {
        if eps.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut power = eps.recip();
        let mut c = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            c.push(a * &power);
            power *= eps;
        }
        Ok(Self::new(c))
    }

    /// Parses either the term syntax (`u + u^2 - 1/2u^3`, `-u^2/2`, `3*u`) or a
    /// comma-separated coefficient list starting at degree 0 (`0,1,0,1`).
    pub fn parse(text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::poly(text, "empty input"));
        }
        if compact.contains(',') {
            let coeffs = compact
                .split(',')
                .map(|tok| {
                    parse_rational(tok)
                        .ok_or_else(|| Error::poly(text, format!("bad coefficient {tok:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Self::new(coeffs));
        }
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (sign, term) in split_terms(&compact).map_err(|m| Error::poly(text, m))? {
            let (c, k) = parse_term(term).map_err(|m| Error::poly(text, m))?;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] += if sign { -c } else { c };
        }
        Ok(Self::new(coeffs))
    }
}

impl FromStr for PolySeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PolySeries::parse(s)
    }
}

/// Compact rendering such as `u+u^2-1/2u^3`; parses back to the same series.
impl fmt::Display for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            if negative {
                f.write_str("-")?;
            } else if wrote {
                f.write_str("+")?;
            }
            let mag = c.abs();
            if k == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                f.write_str("u")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

pub fn parse_rational(tok: &str) -> Option<BigRational> {
    let tok = tok.trim();
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n, d),
        None => (tok, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Splits `-u+2u^2-1/3u^3` into `(negative, term)` pairs.
fn split_terms(s: &str) -> std::result::Result<Vec<(bool, &str)>, String> {
    let mut out = Vec::new();
    let bytes = s.as_bytes();
    let mut start = 0;
    let mut negative = false;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        negative = bytes[0] == b'-';
        start = 1;
    }
    let first = start;
    for i in first..bytes.len() {
        if bytes[i] == b'+' || bytes[i] == b'-' {
            out.push((negative, &s[start..i]));
            negative = bytes[i] == b'-';
            start = i + 1;
        }
    }
    out.push((negative, &s[start..]));
    if out.iter().any(|(_, t)| t.is_empty()) {
        return Err("empty term".into());
    }
    Ok(out)
}

/// One unsigned term: `[c][*]u[^k][/q]` or a bare rational constant.
fn parse_term(term: &str) -> std::result::Result<(BigRational, usize), String> {
    let Some(upos) = term.find('u') else {
        return parse_rational(term)
            .map(|c| (c, 0))
            .ok_or_else(|| format!("bad term {term:?}"));
    };
    let head = term[..upos].strip_suffix('*').unwrap_or(&term[..upos]);
    let mut coeff = if head.is_empty() {
        BigRational::one()
    } else {
        parse_rational(head).ok_or_else(|| format!("bad coefficient {head:?}"))?
    };
    let mut rest = &term[upos + 1..];
    let mut power = 1usize;
    if let Some(after) = rest.strip_prefix('^') {
        let end = after
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(after.len());
        if end == 0 {
            return Err(format!("missing exponent in {term:?}"));
        }
        power = after[..end]
            .parse()
            .map_err(|_| format!("bad exponent in {term:?}"))?;
        rest = &after[end..];
    }
    if let Some(div) = rest.strip_prefix('/') {
        let q: BigInt = div
            .parse()
            .map_err(|_| format!("bad divisor in {term:?}"))?;
        if q.is_zero() {
            return Err("division by zero".into());
        }
        coeff /= BigRational::from_integer(q);
        rest = "";
    }
    if !rest.is_empty() {
        return Err(format!("trailing characters {rest:?} in {term:?}"));
    }
    Ok((coeff, power))
}
