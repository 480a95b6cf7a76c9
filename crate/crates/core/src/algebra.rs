//! The edge algebra `K[φ_e : e ∈ E] / (φ_e^2)`.
//!
//! This is a **commutative** algebra: `φ_S · φ_T = φ_{S∪T}` when `S ∩ T = ∅`
//! and zero otherwise, with no sign. It is not an exterior algebra even though
//! its monomials are square-free.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Multigraph, VertexId};
use crate::series::PolySeries;

/// Sparse element of the edge algebra on `ambient` edges: a map from edge
/// subsets (bitmasks) to nonzero rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    ambient: usize,
    terms: BTreeMap<u64, BigRational>,
}

impl AlgebraElement {
    pub fn zero(ambient: usize) -> Self {
        AlgebraElement {
            ambient,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ambient: usize) -> Self {
        Self::monomial(ambient, 0, BigRational::one())
    }

    /// `coeff · φ_S` for the subset `S` given as a bitmask.
    pub fn monomial(ambient: usize, subset: u64, coeff: BigRational) -> Self {
        debug_assert!(ambient >= 64 || subset >> ambient == 0);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(subset, coeff);
        }
        AlgebraElement { ambient, terms }
    }

    /// The generator `φ_e`.
    pub fn generator(ambient: usize, e: usize) -> Self {
        Self::monomial(ambient, 1 << e, BigRational::one())
    }

    /// Builds an element from `(subset, coefficient)` pairs, summing repeats
    /// and dropping zeros.
    pub fn from_terms(ambient: usize, terms: impl IntoIterator<Item = (u64, BigRational)>) -> Self {
        let mut out = Self::zero(ambient);
        for (s, c) in terms {
            out.add_term(s, c);
        }
        out
    }

    fn add_term(&mut self, subset: u64, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(subset) {
            Entry::Vacant(slot) => {
                slot.insert(coeff);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coeff;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Terms in ascending bitmask order.
    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> + '_ {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn coeff(&self, subset: u64) -> BigRational {
        self.terms
            .get(&subset)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(0)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(*s, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.ambient);
        }
        AlgebraElement {
            ambient: self.ambient,
            terms: self.terms.iter().map(|(s, x)| (*s, x * c)).collect(),
        }
    }

    /// Product: a sum over pairs of disjoint subsets.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc: HashMap<u64, BigRational> = HashMap::new();
        for (s, a) in &small.terms {
            for (t, b) in &large.terms {
                if s & t == 0 {
                    *acc.entry(s | t).or_insert_with(BigRational::zero) += a * b;
                }
            }
        }
        Ok(Self::from_terms(self.ambient, acc))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.ambient);
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.try_mul(self).expect("same ambient");
        }
        out
    }

    /// Evaluates `f(a) = Σ_{k≥1} a_k a^k` for `a` without constant term. Powers
    /// stop once they vanish or pass `nilpotency_bound`. The constant `a_0` is
    /// added as well so that `f(a)` means the same thing for any `f`.
    pub fn eval_poly(f: &PolySeries, a: &Self, nilpotency_bound: usize) -> Result<Self> {
        if !a.constant_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let mut out = Self::monomial(a.ambient, 0, f.coeff(0));
        let mut power = a.clone();
        for k in 1..=f.degree().min(nilpotency_bound) {
            if power.is_zero() {
                break;
            }
            let c = f.coeff(k);
            if !c.is_zero() {
                out = out.try_add(&power.scale(&c))?;
            }
            power = power.try_mul(a)?;
        }
        Ok(out)
    }

    /// Sets `φ_e = 0` and reindexes onto the remaining edges.
    pub fn project_delete(&self, e: EdgeId) -> Result<Self> {
        self.check_edge(e)?;
        let bit = 1u64 << e.0;
        Ok(Self::from_terms(
            self.ambient - 1,
            self.terms
                .iter()
                .filter(|(s, _)| *s & bit == 0)
                .map(|(s, c)| (remove_bit(*s, e.0), c.clone())),
        ))
    }

    /// `∂/∂φ_e`, landing in the algebra on the remaining edges.
    pub fn partial_derivative(&self, e: EdgeId) -> Result<Self> {
        self.check_edge(e)?;
        let bit = 1u64 << e.0;
        Ok(Self::from_terms(
            self.ambient - 1,
            self.terms
                .iter()
                .filter(|(s, _)| *s & bit != 0)
                .map(|(s, c)| (remove_bit(*s, e.0), c.clone())),
        ))
    }

    fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 >= self.ambient {
            return Err(Error::UnknownEdge(e.0));
        }
        Ok(())
    }

    /// Pulls an element over the target edges `E'` back along an injective
    /// edge map `λ : E → E'`. `edge_map[e]` is `λ(e)`; `None` marks an edge
    /// with no image. `φ_{e'}` goes to `φ_e` when `e' = λ(e)` and to 0 when
    /// `e'` is not hit.
    pub fn pullback(&self, edge_map: &[Option<EdgeId>]) -> Result<Self> {
        let mut preimage: HashMap<usize, usize> = HashMap::new();
        for (e, target) in edge_map.iter().enumerate() {
            if let Some(t) = target {
                if t.0 >= self.ambient {
                    return Err(Error::UnknownEdge(t.0));
                }
                if preimage.insert(t.0, e).is_some() {
                    return Err(Error::NonInjective(t.0));
                }
            }
        }
        let source_ambient = edge_map.len();
        let mut out = Self::zero(source_ambient);
        'terms: for (s, c) in &self.terms {
            let mut image = 0u64;
            for bit in bits(*s) {
                match preimage.get(&bit) {
                    Some(&e) => image |= 1 << e,
                    None => continue 'terms,
                }
            }
            out.add_term(image, c.clone());
        }
        Ok(out)
    }

    /// Debug rendering: `c * e{i}e{j}` terms in bitmask order, `1` for the
    /// empty subset, `0` for the zero element.
    pub fn debug_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(s, c)| {
                if *s == 0 {
                    format!("{c} * 1")
                } else {
                    let word: String = bits(*s).map(|i| format!("e{{{i}}}")).collect();
                    format!("{c} * {word}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.debug_string())
    }
}

/// Indices of the set bits in ascending order.
pub fn bits(mut s: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

fn remove_bit(s: u64, i: usize) -> u64 {
    let low = s & ((1u64 << i) - 1);
    let high = (s >> (i + 1)) << i;
    low | high
}

/// Vertex flow `X_v = Σ_e c_{v,e} φ_e` with `c_{v,e} = +1` when the other end
/// of `e` comes later in the vertex order, `-1` when it comes earlier, and 0
/// for loops and edges not at `v`.
pub fn vertex_flow(g: &Multigraph, v: VertexId) -> Result<AlgebraElement> {
    if v.0 >= g.vertex_count() {
        return Err(Error::UnknownVertex(v.0.to_string()));
    }
    let mut x = AlgebraElement::zero(g.edge_count());
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let sign = if e.ends.0 == v {
            1
        } else if e.ends.1 == v {
            -1
        } else {
            continue;
        };
        x.add_term(1 << e.id.0, BigRational::from_integer(sign.into()));
    }
    Ok(x)
}

/// All vertex flows, in vertex order.
pub fn vertex_flows(g: &Multigraph) -> Vec<AlgebraElement> {
    g.vertices()
        .map(|v| vertex_flow(g, v).expect("vertex in range"))
        .collect()
}

/// Deformed generators `Y_v = f(X_v)`.
pub fn deformed_generators(g: &Multigraph, f: &PolySeries) -> Result<Vec<AlgebraElement>> {
    let degrees = g.degrees();
    vertex_flows(g)
        .iter()
        .zip(degrees)
        .map(|(x, d)| AlgebraElement::eval_poly(f, x, d))
        .collect()
}
