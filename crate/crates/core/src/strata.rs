//! Empirical stratification of the parameter space `A_G` and checks of its
//! structural properties.
//!
//! A point of `A_G` is `f = u + a_2 u^2 + ... + a_d u^d` with `d = md_G`.
//! Sampled points are grouped by their Hilbert sequence. Strata found this way
//! are evidence, never a certificate: thin special loci are only hit when a
//! sample lands on them, which is what the named-locus registry is for.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::generate_family;
use crate::filtration::{hilbert_sequence, EngineConfig};
use crate::graph::{HilbertSequence, Multigraph};
use crate::series::{rat, PolySeries};

/// Representatives listed per stratum.
pub const MAX_REPRESENTATIVES: usize = 4;

/// Where a sample point came from, in reporting priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Grid,
    Named,
    Locus,
    Explicit,
    Random,
}

/// `u + sum a_k u^k`, `coeffs[i] = a_{i+2}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterPoint {
    pub coeffs: Vec<BigRational>,
    pub provenance: Provenance,
}

impl ParameterPoint {
    /// Point for the series `f`, normalized at degree `d`.
    pub fn from_series(f: &PolySeries, d: usize, provenance: Provenance) -> Result<Self> {
        let n = f.normalize(d)?;
        Ok(ParameterPoint {
            coeffs: (2..=d).map(|k| n.coeff(k)).collect(),
            provenance,
        })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn to_series(&self) -> PolySeries {
        let mut c = vec![BigRational::zero(), BigRational::one()];
        c.extend(self.coeffs.iter().cloned());
        PolySeries::new(c)
    }

    /// Degrees `k >= 2` with `a_k != 0`.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i + 2)
            .collect()
    }

    /// Canonical member of the scale orbit: the first nonzero `a_k` is made
    /// `±1` when the needed `(k-1)`-th root is rational, otherwise the point
    /// is returned unchanged.
    pub fn orbit_representative(&self) -> ParameterPoint {
        let Some((i, a)) = self.coeffs.iter().enumerate().find(|(_, c)| !c.is_zero()) else {
            return self.clone();
        };
        let m = (i + 1) as u32;
        // eps^m * a = ±1; for even m the sign of a cannot change.
        let target = if m.is_multiple_of(2) && a.is_negative() {
            -BigRational::one()
        } else {
            BigRational::one()
        };
        let Some(eps) = rational_root(&(target / a), m) else {
            return self.clone();
        };
        let f = self.to_series().scale_action(&eps).expect("eps is nonzero");
        ParameterPoint::from_series(&f, self.degree(), self.provenance)
            .expect("scaling keeps f normalized")
    }
}

fn integer_root(n: &BigInt, m: u32) -> Option<BigInt> {
    let r = n.nth_root(m);
    (r.pow(m) == *n).then_some(r)
}

/// Exact rational `m`-th root, if one exists.
fn rational_root(r: &BigRational, m: u32) -> Option<BigRational> {
    if r.is_negative() {
        return if m % 2 == 1 {
            rational_root(&-r, m).map(|x| -x)
        } else {
            None
        };
    }
    let num = integer_root(r.numer(), m)?;
    let den = integer_root(r.denom(), m)?;
    Some(BigRational::new(num, den))
}

/// A family of points on a special locus, parameterized by `t`.
#[derive(Debug, Clone)]
pub struct Locus {
    pub name: &'static str,
    /// Points as series; callers normalize and mask-filter them.
    pub points: Vec<PolySeries>,
}

fn t_values() -> Vec<BigRational> {
    vec![rat(1, 1), rat(-1, 1), rat(2, 1), rat(3, 2), rat(-5, 7)]
}

/// Named special loci keyed by family token.
pub fn locus_registry(key: &str) -> Vec<Locus> {
    match key {
        "k3_plus_e" => vec![Locus {
            name: "3c=4b^2",
            points: t_values()
                .into_iter()
                .map(|t| {
                    let c = rat(4, 3) * &t * &t;
                    PolySeries::new(vec![BigRational::zero(), BigRational::one(), t, c])
                })
                .collect(),
        }],
        _ => Vec::new(),
    }
}

/// Series that recur across the reference tables, truncated at `d`.
pub fn named_polynomials(d: usize) -> Vec<PolySeries> {
    let mut out: Vec<PolySeries> = [&[2][..], &[3], &[4], &[2, 3], &[2, 4], &[3, 4], &[2, 3, 4]]
        .iter()
        .map(|p| PolySeries::u_plus_powers(p).truncate(d))
        .collect();
    out.push(PolySeries::log_one_plus(d));
    out.push(PolySeries::exp_minus_one(d));
    for k in 3..=d {
        out.push(PolySeries::log_one_plus(k));
    }
    out
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    /// Degrees `k` in `2..=md_G` whose coefficients may be nonzero.
    pub mask: BTreeSet<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Registry key for special loci, usually the family token.
    pub locus: Option<String>,
    /// Additional points, kept whatever their support.
    pub extra: Vec<PolySeries>,
    pub engine: EngineConfig,
}

impl SweepConfig {
    pub fn new(mask: impl IntoIterator<Item = usize>, samples: usize, seed: u64) -> Self {
        SweepConfig {
            mask: mask.into_iter().collect(),
            samples,
            seed,
            locus: None,
            extra: Vec::new(),
            engine: EngineConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StratumReport {
    #[serde(rename = "hilbert")]
    pub hilbert_sequence: HilbertSequence,
    pub count: usize,
    pub representatives: Vec<String>,
    pub lex_max: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub mask: Vec<usize>,
    pub samples: usize,
    /// Ascending lexicographic order; the last one is the lex-maximal.
    pub strata: Vec<StratumReport>,
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> BigRational {
    const SMALL: [(i64, i64); 8] = [
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 2),
        (1, 3),
        (-1, 3),
    ];
    if rng.gen_bool(0.5) {
        let (p, q) = SMALL[rng.gen_range(0..SMALL.len())];
        rat(p, q)
    } else {
        let mut p = 0;
        while p == 0 {
            p = rng.gen_range(-50..=50);
        }
        rat(p, rng.gen_range(1..=50))
    }
}

fn within_mask(p: &ParameterPoint, mask: &BTreeSet<usize>) -> bool {
    p.support().is_subset(mask)
}

/// Samples `A_G` on the coefficients in `config.mask` and groups the points
/// by Hilbert sequence.
///
/// The points are: every 0/1 pattern on the mask, `samples` seeded random
/// nonzero rationals on the mask, the named polynomials and registered loci
/// supported in the mask, and `config.extra`. Output is deterministic for a
/// fixed seed whatever the thread count.
pub fn sweep(g: &Multigraph, config: &SweepConfig) -> Result<SweepReport> {
    if config.samples == 0 {
        return Err(Error::Precondition(
            "at least one random sample is required".into(),
        ));
    }
    let d = g.max_degree().max(1);
    if let Some(&k) = config.mask.iter().find(|&&k| k < 2 || k > d) {
        return Err(Error::Precondition(format!(
            "mask degree {k} outside 2..={d}"
        )));
    }
    g.check_edge_cap(config.engine.max_edges)?;
    let mask: Vec<usize> = config.mask.iter().copied().collect();

    let mut points: BTreeMap<Vec<BigRational>, Provenance> = BTreeMap::new();
    let mut add = |p: ParameterPoint| {
        let slot = points.entry(p.coeffs).or_insert(p.provenance);
        *slot = (*slot).min(p.provenance);
    };
    let zero_point = || vec![BigRational::zero(); d.saturating_sub(1)];

    for pattern in 0u64..1 << mask.len() {
        let mut coeffs = zero_point();
        for (bit, &k) in mask.iter().enumerate() {
            if pattern >> bit & 1 == 1 {
                coeffs[k - 2] = BigRational::one();
            }
        }
        add(ParameterPoint {
            coeffs,
            provenance: Provenance::Grid,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.samples {
        let mut coeffs = zero_point();
        for &k in &mask {
            coeffs[k - 2] = random_coefficient(&mut rng);
        }
        add(ParameterPoint {
            coeffs,
            provenance: Provenance::Random,
        });
    }
    for f in named_polynomials(d) {
        let p = ParameterPoint::from_series(&f, d, Provenance::Named)?;
        if within_mask(&p, &config.mask) {
            add(p);
        }
    }
    if let Some(key) = &config.locus {
        for locus in locus_registry(key) {
            for f in &locus.points {
                let p = ParameterPoint::from_series(f, d, Provenance::Locus)?;
                if within_mask(&p, &config.mask) {
                    add(p);
                }
            }
        }
    }
    for f in &config.extra {
        add(ParameterPoint::from_series(f, d, Provenance::Explicit)?);
    }

    let points: Vec<ParameterPoint> = points
        .into_iter()
        .map(|(coeffs, provenance)| ParameterPoint { coeffs, provenance })
        .collect();
    let sequences: Vec<HilbertSequence> = points
        .par_iter()
        .map(|p| hilbert_sequence(g, &p.to_series(), &config.engine).map(|r| r.hilbert_sequence))
        .collect::<Result<_>>()?;

    let mut groups: BTreeMap<HilbertSequence, Vec<&ParameterPoint>> = BTreeMap::new();
    for (p, h) in points.iter().zip(sequences) {
        groups.entry(h).or_default().push(p);
    }
    let last = groups.len().saturating_sub(1);
    let strata = groups
        .into_iter()
        .enumerate()
        .map(|(i, (h, members))| {
            let mut reps: Vec<(Provenance, usize, String)> = members
                .iter()
                .map(|p| {
                    let r = p.orbit_representative();
                    let s = r.to_series().to_string();
                    (p.provenance, s.len(), s)
                })
                .collect();
            reps.sort();
            let mut seen = BTreeSet::new();
            let representatives = reps
                .into_iter()
                .filter(|(_, _, s)| seen.insert(s.clone()))
                .map(|(_, _, s)| s)
                .take(MAX_REPRESENTATIVES)
                .collect();
            StratumReport {
                hilbert_sequence: h,
                count: members.len(),
                representatives,
                lex_max: i == last,
            }
        })
        .collect();
    Ok(SweepReport {
        seed: config.seed,
        mask,
        samples: config.samples,
        strata,
    })
}

/// Lexicographic order after right-padding with zeros.
pub fn lex_compare(a: &HilbertSequence, b: &HilbertSequence) -> Ordering {
    a.lex_cmp(b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleCheck {
    pub epsilon: String,
    pub scaled_f: String,
    pub hilbert: HilbertSequence,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScaleReport {
    pub f: String,
    pub hilbert: HilbertSequence,
    pub checks: Vec<ScaleCheck>,
    pub holds: bool,
}

/// Compares `H(f)` with `H(f_eps)`, `f_eps(u) = f(eps u) / eps`.
pub fn check_scale_invariance(
    g: &Multigraph,
    f: &PolySeries,
    epsilons: &[BigRational],
    config: &EngineConfig,
) -> Result<ScaleReport> {
    let base = hilbert_sequence(g, f, config)?;
    let mut checks = Vec::with_capacity(epsilons.len());
    for eps in epsilons {
        let scaled = f.scale_action(eps)?;
        let h = hilbert_sequence(g, &scaled, config)?.hilbert_sequence;
        checks.push(ScaleCheck {
            epsilon: eps.to_string(),
            scaled_f: scaled.to_string(),
            equal: h == base.hilbert_sequence,
            hilbert: h,
        });
    }
    Ok(ScaleReport {
        f: base.normalized_f,
        holds: checks.iter().all(|c| c.equal),
        hilbert: base.hilbert_sequence,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpecializationReport {
    pub generic: String,
    pub special: String,
    pub generic_hilbert: HilbertSequence,
    pub special_hilbert: HilbertSequence,
    /// Holds when the special sequence is lexicographically `<=`.
    pub holds: bool,
}

/// Checks `H(special) <= H(generic)` where `special` zeroes some
/// coefficients of `generic`.
pub fn check_specialization(
    g: &Multigraph,
    generic: &ParameterPoint,
    special: &ParameterPoint,
    config: &EngineConfig,
) -> Result<SpecializationReport> {
    let len = generic.coeffs.len().max(special.coeffs.len());
    let zero = BigRational::zero();
    for i in 0..len {
        let a = generic.coeffs.get(i).unwrap_or(&zero);
        let b = special.coeffs.get(i).unwrap_or(&zero);
        if !b.is_zero() && a != b {
            return Err(Error::Precondition(format!(
                "coefficient of u^{} is neither kept nor zeroed",
                i + 2
            )));
        }
    }
    let gf = generic.to_series();
    let sf = special.to_series();
    let gh = hilbert_sequence(g, &gf, config)?.hilbert_sequence;
    let sh = hilbert_sequence(g, &sf, config)?.hilbert_sequence;
    Ok(SpecializationReport {
        generic: gf.to_string(),
        special: sf.to_string(),
        holds: lex_compare(&sh, &gh) != Ordering::Greater,
        generic_hilbert: gh,
        special_hilbert: sh,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonotonicityReport {
    pub graph_cumulative: Vec<u64>,
    pub subgraph_cumulative: Vec<u64>,
    pub holds: bool,
}

/// Checks `dim C^{f,k}_H <= dim C^{f,k}_G` for every `k`, for `H` obtained
/// from `G` by deleting edges.
pub fn check_subgraph_monotonicity(
    g: &Multigraph,
    h: &Multigraph,
    f: &PolySeries,
    config: &EngineConfig,
) -> Result<MonotonicityReport> {
    if !h.is_edge_subgraph_of(g) {
        return Err(Error::Precondition("not a spanning edge subgraph".into()));
    }
    let cg = hilbert_sequence(g, f, config)?.cumulative_dims;
    let ch = hilbert_sequence(h, f, config)?.cumulative_dims;
    let len = cg.len().max(ch.len());
    let at = |v: &[u64], k: usize| v.get(k).or(v.last()).copied().unwrap_or(0);
    let holds = (0..len).all(|k| at(&ch, k) <= at(&cg, k));
    Ok(MonotonicityReport {
        graph_cumulative: cg,
        subgraph_cumulative: ch,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub n: usize,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimResult {
    pub claim: String,
    pub checks: Vec<ClaimCheck>,
    /// True when every applicable `n` agrees (vacuously true if none apply).
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub family: String,
    pub f: String,
    pub sequences: Vec<(usize, HilbertSequence)>,
    pub claims: Vec<ClaimResult>,
}

/// Closed form for the entry at `index` (0-based) valid from `n_min`:
/// `poly(n) / denominator` with integer coefficients, constant term first.
struct ClosedForm {
    index: usize,
    n_min: usize,
    coeffs: &'static [i64],
    denominator: i64,
    text: &'static str,
}

const CHAIN_FORMS: &[ClosedForm] = &[
    ClosedForm {
        index: 2,
        n_min: 5,
        coeffs: &[-10, 1, 1],
        denominator: 2,
        text: "(n^2+n-10)/2",
    },
    ClosedForm {
        index: 3,
        n_min: 7,
        coeffs: &[30, -46, 3, 1],
        denominator: 6,
        text: "(n^3+3n^2-46n+30)/6",
    },
    ClosedForm {
        index: 4,
        n_min: 9,
        coeffs: &[1080, 42, -121, 6, 1],
        denominator: 24,
        text: "(n^4+6n^3-121n^2+42n+1080)/24",
    },
    ClosedForm {
        index: 5,
        n_min: 11,
        coeffs: &[-12000, 9364, -250, -245, 10, 1],
        denominator: 120,
        text: "(n^5+10n^4-245n^3-250n^2+9364n-12000)/120",
    },
    ClosedForm {
        index: 6,
        n_min: 13,
        coeffs: &[93600, -201960, 11874, 1785, 3325, 15, 1],
        denominator: 720,
        text: "(n^6+15n^5+3325n^4+1785n^3+11874n^2-201960n+93600)/720",
    },
];

const CYCLE_FORMS: &[ClosedForm] = &[
    ClosedForm {
        index: 2,
        n_min: 5,
        coeffs: &[-2, 1, 1],
        denominator: 2,
        text: "(n^2+n-2)/2",
    },
    ClosedForm {
        index: 3,
        n_min: 7,
        coeffs: &[0, -16, 3, 1],
        denominator: 6,
        text: "(n^3+3n^2-16n)/6",
    },
];

fn evaluate_form(form: &ClosedForm, n: usize) -> BigRational {
    let n = BigInt::from(n);
    let mut acc = BigInt::zero();
    for c in form.coeffs.iter().rev() {
        acc = acc * &n + BigInt::from(*c);
    }
    BigRational::new(acc, BigInt::from(form.denominator))
}

fn closed_form_claim(form: &ClosedForm, seqs: &[(usize, HilbertSequence)]) -> ClaimResult {
    let checks: Vec<ClaimCheck> = seqs
        .iter()
        .filter(|(n, _)| *n >= form.n_min)
        .map(|(n, h)| {
            let expected = evaluate_form(form, *n);
            let actual = h.get(form.index);
            ClaimCheck {
                n: *n,
                expected: expected.to_string(),
                actual: actual.to_string(),
                holds: expected == BigRational::from_integer(actual.into()),
            }
        })
        .collect();
    ClaimResult {
        claim: format!(
            "for n >= {}, entry {} equals {}",
            form.n_min,
            form.index + 1,
            form.text
        ),
        holds: checks.iter().all(|c| c.holds),
        checks,
    }
}

fn power_of_three_claim(seqs: &[(usize, HilbertSequence)]) -> ClaimResult {
    let checks: Vec<ClaimCheck> = seqs
        .iter()
        .filter(|(n, _)| n % 2 == 0 && *n >= 2)
        .map(|(n, h)| {
            let k = n / 2;
            let expected = BigInt::from(3).pow(k as u32 - 1);
            let actual = h.get(k);
            ClaimCheck {
                n: *n,
                expected: expected.to_string(),
                actual: actual.to_string(),
                holds: expected == BigInt::from(actual),
            }
        })
        .collect();
    ClaimResult {
        claim: "for n = 2k, entry k+1 equals 3^(k-1)".into(),
        holds: checks.iter().all(|c| c.holds),
        checks,
    }
}

/// `h_k(n+1) = h_k(n) + h_{k-1}(n)` for consecutive computed sizes.
fn pascal_claim(seqs: &[(usize, HilbertSequence)]) -> ClaimResult {
    let checks: Vec<ClaimCheck> = seqs
        .windows(2)
        .filter(|w| w[1].0 == w[0].0 + 1)
        .map(|w| {
            let (prev, next) = (&w[0].1, &w[1].1);
            let len = next.len().max(prev.len() + 1);
            let expected: Vec<u64> = (0..len)
                .map(|k| prev.get(k) + if k > 0 { prev.get(k - 1) } else { 0 })
                .collect();
            // The constant term is always 1, not a sum.
            let expected = HilbertSequence::new(
                std::iter::once(1)
                    .chain(expected.into_iter().skip(1))
                    .collect(),
            );
            ClaimCheck {
                n: w[1].0,
                expected: expected.to_string(),
                actual: next.to_string(),
                holds: &expected == next,
            }
        })
        .collect();
    ClaimResult {
        claim: "h_k(n+1) = h_k(n) + h_(k-1)(n) for k >= 1".into(),
        holds: checks.iter().all(|c| c.holds),
        checks,
    }
}

/// Families with recorded closed-form or recursion observations.
pub const CONJECTURE_FAMILIES: &[&str] = &["chain", "cycle", "dn", "dn_hat"];

/// Evaluates the recorded observations for `family` over `ns`. Failures are
/// reported in the result, never as errors.
pub fn conjecture_report(
    family: &str,
    f: &PolySeries,
    ns: impl IntoIterator<Item = usize>,
    config: &EngineConfig,
) -> Result<ConjectureReport> {
    if !CONJECTURE_FAMILIES.contains(&family) {
        return Err(Error::UnknownFamily(format!(
            "{family} (no recorded conjectures)"
        )));
    }
    let ns: Vec<usize> = ns
        .into_iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let sequences: Vec<(usize, HilbertSequence)> = ns
        .par_iter()
        .map(|&n| {
            let g = generate_family(family, n)?;
            Ok((n, hilbert_sequence(&g, f, config)?.hilbert_sequence))
        })
        .collect::<Result<_>>()?;
    let claims = match family {
        "chain" => {
            let mut c: Vec<ClaimResult> = CHAIN_FORMS
                .iter()
                .map(|form| closed_form_claim(form, &sequences))
                .collect();
            c.push(power_of_three_claim(&sequences));
            c
        }
        "cycle" => CYCLE_FORMS
            .iter()
            .map(|form| closed_form_claim(form, &sequences))
            .collect(),
        _ => vec![pascal_claim(&sequences)],
    };
    Ok(ConjectureReport {
        family: family.to_string(),
        f: f.to_string(),
        sequences,
        claims,
    })
}
