//! Defining relations of `C_G` and `C^f_G`, checked by evaluation in the edge
//! algebra.
//!
//! Relations are kept in factored form `base^exponent`; [`Relation::expand`]
//! multiplies out the power when the explicit polynomial is wanted.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::{deformed_generators, AlgebraElement};
use crate::error::{Error, Result};
use crate::filtration::{self, EngineConfig, Labeling};
use crate::graph::{Multigraph, VertexId};
use crate::series::PolySeries;

/// Largest vertex count for which all subsets are enumerated.
pub const DEFAULT_MAX_VERTICES: usize = 12;

/// Polynomial over the rationals in variables `x_0, ..., x_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars], c);
        p
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn var(vars: usize, i: usize) -> Self {
        Self::monomial(vars, i, 1, BigRational::one())
    }

    /// `c * x_i^k`.
    pub fn monomial(vars: usize, i: usize, k: u32, c: BigRational) -> Self {
        assert!(i < vars, "variable index out of range");
        let mut e = vec![0; vars];
        e[i] = k;
        let mut p = Self::zero(vars);
        p.add_term(e, c);
        p
    }

    /// `f(x_i)` for a univariate series `f`.
    pub fn substitute(vars: usize, i: usize, f: &PolySeries) -> Self {
        let mut p = Self::zero(vars);
        for (k, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                p = p.add(&Self::monomial(vars, i, k as u32, c.clone()));
            }
        }
        p
    }

    pub fn from_terms(
        vars: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, BigRational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(e.clone())
            .or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> + '_ {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn coeff(&self, e: &[u32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.vars, other.vars, "variable count");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(
            self.vars,
            self.terms.iter().map(|(e, x)| (e.clone(), x * c)),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-BigRational::one()))
    }

    /// Product with every monomial having `x_i^{b}` for `b > bounds[i]`
    /// dropped. `None` leaves a variable unbounded.
    pub fn mul_reduced(&self, other: &Self, bounds: &[Option<u32>]) -> Self {
        assert_eq!(self.vars, other.vars, "variable count");
        let mut out = Self::zero(self.vars);
        for (a, x) in &self.terms {
            'pairs: for (b, y) in &other.terms {
                let mut e = Vec::with_capacity(self.vars);
                for i in 0..self.vars {
                    let k = a[i] + b[i];
                    if bounds.get(i).copied().flatten().is_some_and(|m| k > m) {
                        continue 'pairs;
                    }
                    e.push(k);
                }
                out.add_term(e, x * y);
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.mul_reduced(other, &[])
    }

    pub fn pow_reduced(&self, k: u32, bounds: &[Option<u32>]) -> Self {
        let mut out = Self::one(self.vars);
        for _ in 0..k {
            if out.is_zero() {
                break;
            }
            out = out.mul_reduced(self, bounds);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        self.pow_reduced(k, &[])
    }

    /// Drops monomials with `x_i^{b}`, `b > bounds[i]`.
    pub fn reduce(&self, bounds: &[Option<u32>]) -> Self {
        self.mul_reduced(&Self::one(self.vars), bounds)
    }

    /// Substitutes `x_i := values[i]` in the edge algebra.
    pub fn evaluate(&self, values: &[AlgebraElement]) -> Result<AlgebraElement> {
        assert_eq!(values.len(), self.vars, "one value per variable");
        let ambient = values.first().map_or(0, AlgebraElement::ambient);
        let mut powers: Vec<Vec<AlgebraElement>> = values
            .iter()
            .map(|v| vec![AlgebraElement::one(v.ambient())])
            .collect();
        let mut out = AlgebraElement::zero(ambient);
        for (e, c) in &self.terms {
            let mut m = AlgebraElement::monomial(ambient, 0, c.clone());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = powers[i].last().expect("nonempty").try_mul(&values[i])?;
                    powers[i].push(next);
                }
                m = m.try_mul(&powers[i][k as usize])?;
                if m.is_zero() {
                    break;
                }
            }
            out = out.try_add(&m)?;
        }
        Ok(out)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Highest total degree first.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            let negative = c < &BigRational::zero();
            let abs = if negative { -c.clone() } else { c.clone() };
            match (n, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if vars.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{abs}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationKind {
    /// `y_v^{deg v + 1}`.
    Nilpotency,
    /// `(sum_{v in I} x_v)^{D_I + 1}` in the undeformed algebra.
    Graded,
    /// `(sum_{v in I} h(y_v))^{D_I + 1}` with `h` the relation series.
    Deformed,
}

/// `base^exponent`, a polynomial in one variable per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    /// Sorted, nonempty.
    pub subset: Vec<VertexId>,
    pub exponent: u32,
    pub base: MultiPoly,
}

impl Relation {
    pub fn expand(&self) -> MultiPoly {
        self.base.pow(self.exponent)
    }

    /// Expansion modulo `x_v^{bounds[v] + 1}`.
    pub fn expand_reduced(&self, bounds: &[Option<u32>]) -> MultiPoly {
        self.base.pow_reduced(self.exponent, bounds)
    }

    pub fn is_cut(&self) -> bool {
        self.kind != RelationKind::Nilpotency
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSet {
    pub vertex_count: usize,
    pub relations: Vec<Relation>,
}

impl RelationSet {
    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn nilpotency(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.relations.iter().filter(|r| !r.is_cut())
    }

    pub fn cuts(&self) -> impl Iterator<Item = &Relation> + '_ {
        self.relations.iter().filter(|r| r.is_cut())
    }

    pub fn find(&self, subset: &[usize]) -> Option<&Relation> {
        self.cuts().find(|r| {
            r.subset.len() == subset.len() && r.subset.iter().zip(subset).all(|(v, &i)| v.0 == i)
        })
    }
}

fn check_vertex_cap(g: &Multigraph, cap: usize) -> Result<()> {
    if g.vertex_count() > cap.min(63) {
        return Err(Error::CapExceeded {
            what: "vertices for subset enumeration",
            actual: g.vertex_count(),
            limit: cap.min(63),
        });
    }
    Ok(())
}

fn subset_of(mask: u64) -> Vec<VertexId> {
    crate::algebra::bits(mask).map(VertexId).collect()
}

fn sum_over(n: usize, mask: u64, h: &PolySeries) -> MultiPoly {
    crate::algebra::bits(mask).fold(MultiPoly::zero(n), |acc, v| {
        acc.add(&MultiPoly::substitute(n, v, h))
    })
}

/// `p_I = (sum_{v in I} x_v)^{D_I + 1}` for every nonempty `I`.
pub fn graded_relations(g: &Multigraph, max_vertices: usize) -> Result<RelationSet> {
    check_vertex_cap(g, max_vertices)?;
    let n = g.vertex_count();
    let identity = PolySeries::identity();
    let relations = (1..1u64 << n)
        .map(|mask| Relation {
            kind: RelationKind::Graded,
            subset: subset_of(mask),
            exponent: g.cut_size_mask(mask) as u32 + 1,
            base: sum_over(n, mask, &identity),
        })
        .collect();
    Ok(RelationSet {
        vertex_count: n,
        relations,
    })
}

/// Series `h` with `X_v = h(Y_v)`, to degree `md_G`.
pub fn relation_series(g: &Multigraph, f: &PolySeries, labeling: Labeling) -> Result<PolySeries> {
    let md = g.max_degree().max(1);
    let normalized = f.normalize(md)?;
    match labeling {
        Labeling::Relation => Ok(normalized),
        Labeling::Generator => normalized.compositional_inverse(md),
    }
}

/// Nilpotency relations `y_v^{deg v + 1}` and, for `|I| >= 2`, the cut
/// relations `(sum_{v in I} h(y_v))^{D_I + 1}` where `X_v = h(Y_v)`.
pub fn deformed_relations(
    g: &Multigraph,
    f: &PolySeries,
    labeling: Labeling,
    max_vertices: usize,
) -> Result<RelationSet> {
    check_vertex_cap(g, max_vertices)?;
    let h = relation_series(g, f, labeling)?;
    let n = g.vertex_count();
    let degrees = g.degrees();
    let mut relations: Vec<Relation> = (0..n)
        .map(|v| Relation {
            kind: RelationKind::Nilpotency,
            subset: vec![VertexId(v)],
            exponent: degrees[v] as u32 + 1,
            base: MultiPoly::var(n, v),
        })
        .collect();
    relations.extend(
        (1..1u64 << n)
            .filter(|m| m.count_ones() >= 2)
            .map(|mask| Relation {
                kind: RelationKind::Deformed,
                subset: subset_of(mask),
                exponent: g.cut_size_mask(mask) as u32 + 1,
                base: sum_over(n, mask, &h),
            }),
    );
    Ok(RelationSet {
        vertex_count: n,
        relations,
    })
}

/// Keeps one cut relation from each complementary pair: the smaller subset,
/// or on a size tie the lexicographically smaller one. `I = V` always stays.
///
/// Sound because `sum_V h(y_v) = 0` makes the two relations of a pair agree up
/// to sign, and `D_I = D_{V \ I}`. A singleton's partner may be dropped even
/// when the singleton itself is represented by its nilpotency relation.
pub fn redundancy_filter(rels: &RelationSet) -> RelationSet {
    let n = rels.vertex_count;
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let keep = |r: &Relation| {
        if !r.is_cut() {
            return true;
        }
        let mask: u64 = r.subset.iter().fold(0, |m, v| m | 1 << v.0);
        let comp = full & !mask;
        if comp == 0 {
            return true;
        }
        let (a, b) = (mask.count_ones(), comp.count_ones());
        a < b || (a == b && subset_of(mask) < subset_of(comp))
    };
    RelationSet {
        vertex_count: n,
        relations: rels.relations.iter().filter(|r| keep(r)).cloned().collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub subset: Vec<String>,
    pub exponent: u32,
    pub kind: RelationKind,
    pub verified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub relations: Vec<RelationCheck>,
    pub all_verified: bool,
}

/// Evaluates every relation at `y_v := Y_v` (or `x_v := X_v` for graded
/// relations) inside the edge algebra.
pub fn verify_relations(
    g: &Multigraph,
    f: &PolySeries,
    rels: &RelationSet,
    config: &EngineConfig,
) -> Result<RelationReport> {
    g.check_edge_cap(config.max_edges)?;
    let md = g.max_degree().max(1);
    let generator = config.labeling.generator_series(&f.normalize(md)?, md)?;
    let ys = deformed_generators(g, &generator)?;
    let xs = crate::algebra::vertex_flows(g);
    let mut relations = Vec::with_capacity(rels.len());
    for r in &rels.relations {
        let values = if r.kind == RelationKind::Graded {
            &xs
        } else {
            &ys
        };
        let verified = r.base.evaluate(values)?.pow(r.exponent).is_zero();
        relations.push(RelationCheck {
            subset: r.subset.iter().map(|&v| g.label(v).to_string()).collect(),
            exponent: r.exponent,
            kind: r.kind,
            verified,
        });
    }
    let all_verified = relations.iter().all(|c| c.verified);
    Ok(RelationReport {
        relations,
        all_verified,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionReport {
    pub filtered_total: u64,
    pub graded_total: u64,
    pub forest_count: u64,
    pub consistent: bool,
}

/// `dim C^f_G`, the total of the graded sequence, and the forest count.
pub fn dimension_consistency(
    g: &Multigraph,
    f: &PolySeries,
    config: &EngineConfig,
) -> Result<DimensionReport> {
    let filtered_total = filtration::filtered_total(g, f, config)?;
    let graded_total = g.graded_hilbert(config.max_edges)?.total();
    let forest_count = g.spanning_forest_count(config.max_edges)?;
    Ok(DimensionReport {
        filtered_total,
        graded_total,
        forest_count,
        consistent: filtered_total == graded_total && graded_total == forest_count,
    })
}
