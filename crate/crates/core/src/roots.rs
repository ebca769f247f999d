//! Root systems of vector configurations.
//!
//! A functional `α ∈ Hom(Zⁿ, Z)` is a root of `V = {v₁ … v_m}` when its
//! pairing vector `(⟨α, v₁⟩, …, ⟨α, v_m⟩)` is `±e_k` (type 1) or
//! `±e_i ± e_j` (type 2). Because `V` has full rank the pairing map is
//! injective, so roots are found by solving one integer linear system per
//! candidate pairing vector. [`oracle_roots`] recomputes the same set by
//! bounded brute force.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::config::{fmt_vec, SignAssignment, VectorConfiguration};
use crate::error::{Error, Result};
use crate::lattice::{determinant, to_i64_vec, DiophantineSystem, IntegerMatrix};

/// Number of nonzero pairings: one for type 1, two for type 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootKind {
    Type1,
    Type2,
}

impl RootKind {
    pub fn as_u8(self) -> u8 {
        match self {
            RootKind::Type1 => 1,
            RootKind::Type2 => 2,
        }
    }
}

/// A root together with its cached pairing vector.
///
/// In a dual system (see [`dual`]) the coroot of a type-1 root keeps
/// `kind == Type1` but its single nonzero pairing is `±2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "RawRoot", try_from = "RawRoot")]
pub struct Root {
    alpha: Vec<i64>,
    pairing: Vec<i64>,
    kind: RootKind,
}

#[derive(Serialize, Deserialize)]
struct RawRoot {
    alpha: Vec<i64>,
    pairing: Vec<i64>,
    kind: u8,
}

impl From<Root> for RawRoot {
    fn from(r: Root) -> Self {
        RawRoot {
            alpha: r.alpha,
            pairing: r.pairing,
            kind: r.kind.as_u8(),
        }
    }
}

impl TryFrom<RawRoot> for Root {
    type Error = Error;

    fn try_from(raw: RawRoot) -> Result<Self> {
        let root = Root::from_parts(raw.alpha, raw.pairing)?;
        if root.kind.as_u8() != raw.kind {
            return Err(Error::InvalidInput(format!(
                "kind {} does not match pairing {:?}",
                raw.kind, root.pairing
            )));
        }
        Ok(root)
    }
}

impl Root {
    /// Checks that `alpha` is a root of `config` and caches its pairings.
    pub fn new(config: &VectorConfiguration, alpha: Vec<i64>) -> Result<Self> {
        let pairing = pairing_vector(config, &alpha)?;
        if !is_root_pattern(&pairing) {
            return Err(Error::NotARoot { alpha, pairing });
        }
        Root::from_parts(alpha, pairing)
    }

    fn from_parts(alpha: Vec<i64>, pairing: Vec<i64>) -> Result<Self> {
        let kind = match pairing.iter().filter(|&&x| x != 0).count() {
            1 => RootKind::Type1,
            2 => RootKind::Type2,
            _ => return Err(Error::NotARoot { alpha, pairing }),
        };
        Ok(Root {
            alpha,
            pairing,
            kind,
        })
    }

    pub fn alpha(&self) -> &[i64] {
        &self.alpha
    }

    pub fn pairing(&self) -> &[i64] {
        &self.pairing
    }

    pub fn kind(&self) -> RootKind {
        self.kind
    }

    /// Indices with nonzero pairing, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.pairing
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// `(α, α) = Σ ⟨α, vᵢ⟩²`.
    pub fn squared_length(&self) -> i64 {
        self.form(self)
    }

    /// `(α, β) = Σ ⟨α, vᵢ⟩⟨β, vᵢ⟩`, computed from cached pairings.
    pub fn form(&self, other: &Root) -> i64 {
        self.pairing
            .iter()
            .zip(&other.pairing)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn negated(&self) -> Root {
        Root {
            alpha: self.alpha.iter().map(|x| -x).collect(),
            pairing: self.pairing.iter().map(|x| -x).collect(),
            kind: self.kind,
        }
    }

    /// Exactly one pairing `+1`, one `−1`, the rest zero.
    pub fn has_opposite_signs(&self) -> bool {
        self.kind == RootKind::Type2
            && self.pairing.iter().filter(|&&x| x == 1).count() == 1
            && self.pairing.iter().filter(|&&x| x == -1).count() == 1
    }
}

impl PartialOrd for Root {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Root {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.alpha
            .cmp(&other.alpha)
            .then_with(|| self.pairing.cmp(&other.pairing))
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_vec(&self.alpha))
    }
}

/// Type 1 or type 2 pairing pattern.
pub fn is_root_pattern(pairing: &[i64]) -> bool {
    // hot in the brute-force oracle, so no allocation and an early exit
    let mut nonzero = 0;
    for &x in pairing {
        if x != 0 {
            if x.abs() != 1 || nonzero == 2 {
                return false;
            }
            nonzero += 1;
        }
    }
    nonzero > 0
}

/// `(⟨α, v₁⟩, …, ⟨α, v_m⟩)`.
pub fn pairing_vector(config: &VectorConfiguration, alpha: &[i64]) -> Result<Vec<i64>> {
    if alpha.len() != config.rank() {
        return Err(Error::DimensionMismatch(format!(
            "functional has length {}, rank is {}",
            alpha.len(),
            config.rank()
        )));
    }
    config
        .vectors()
        .iter()
        .map(|v| {
            let s: i128 = v
                .iter()
                .zip(alpha)
                .map(|(&a, &b)| i128::from(a) * i128::from(b))
                .sum();
            i64::try_from(s).map_err(|_| Error::Overflow(format!("pairing {s}")))
        })
        .collect()
}

/// The positive-definite form `(α, β) = Σ ⟨α, vᵢ⟩⟨β, vᵢ⟩`.
pub fn bilinear(config: &VectorConfiguration, alpha: &[i64], beta: &[i64]) -> Result<i64> {
    let pa = pairing_vector(config, alpha)?;
    let pb = pairing_vector(config, beta)?;
    let s: i128 = pa
        .iter()
        .zip(&pb)
        .map(|(&a, &b)| i128::from(a) * i128::from(b))
        .sum();
    i64::try_from(s).map_err(|_| Error::Overflow(format!("form value {s}")))
}

/// A finite set of roots over a fixed configuration, sorted by `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawRootSystem", try_from = "RawRootSystem")]
pub struct RootSystem {
    configuration: VectorConfiguration,
    roots: Vec<Root>,
    dual: bool,
}

#[derive(Serialize, Deserialize)]
struct RawRootSystem {
    configuration: VectorConfiguration,
    roots: Vec<Root>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dual: bool,
}

impl From<RootSystem> for RawRootSystem {
    fn from(r: RootSystem) -> Self {
        RawRootSystem {
            configuration: r.configuration,
            roots: r.roots,
            dual: r.dual,
        }
    }
}

impl TryFrom<RawRootSystem> for RootSystem {
    type Error = Error;

    fn try_from(raw: RawRootSystem) -> Result<Self> {
        for r in &raw.roots {
            let p = pairing_vector(&raw.configuration, r.alpha())?;
            if p != r.pairing() {
                return Err(Error::InvalidInput(format!(
                    "pairing of {} is {:?}, file says {:?}",
                    r,
                    p,
                    r.pairing()
                )));
            }
        }
        Ok(RootSystem::from_roots(
            raw.configuration,
            raw.roots,
            raw.dual,
        ))
    }
}

impl RootSystem {
    fn from_roots(configuration: VectorConfiguration, mut roots: Vec<Root>, dual: bool) -> Self {
        roots.sort();
        roots.dedup();
        RootSystem {
            configuration,
            roots,
            dual,
        }
    }

    /// A root set from explicit functionals; each must be a root of `config`.
    /// No closure is assumed (see [`verify_closure`]).
    pub fn from_alphas(config: &VectorConfiguration, alphas: Vec<Vec<i64>>) -> Result<Self> {
        let roots = alphas
            .into_iter()
            .map(|a| Root::new(config, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(RootSystem::from_roots(config.clone(), roots, false))
    }

    /// Same configuration, a subset of the roots.
    pub fn restrict<'a, I>(&self, roots: I) -> RootSystem
    where
        I: IntoIterator<Item = &'a Root>,
    {
        RootSystem::from_roots(
            self.configuration.clone(),
            roots.into_iter().cloned().collect(),
            self.dual,
        )
    }

    pub fn configuration(&self) -> &VectorConfiguration {
        &self.configuration
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Whether this set is a dual (coroot) system.
    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn get(&self, alpha: &[i64]) -> Option<&Root> {
        self.roots
            .binary_search_by(|r| r.alpha.as_slice().cmp(alpha))
            .ok()
            .map(|i| &self.roots[i])
    }

    pub fn contains(&self, alpha: &[i64]) -> bool {
        self.get(alpha).is_some()
    }

    pub fn alphas(&self) -> Vec<Vec<i64>> {
        self.roots.iter().map(|r| r.alpha.clone()).collect()
    }

    pub fn is_subset_of(&self, other: &RootSystem) -> bool {
        self.roots.iter().all(|r| other.contains(&r.alpha))
    }
}

/// All roots of `config`.
///
/// Solves `pairing(α) = t` for each of the `2m²` vectors `t ∈ Zᵐ` with
/// `(t, t) ∈ {1, 2}`. Every solvable target has exactly one solution.
pub fn compute_roots(config: &VectorConfiguration) -> Result<RootSystem> {
    let m = config.len();
    let system = DiophantineSystem::new(&config.matrix());
    debug_assert_eq!(system.rank(), config.rank());

    let mut roots = Vec::new();
    for target in root_targets(m) {
        let rhs: Vec<BigInt> = target.iter().map(|&x| BigInt::from(x)).collect();
        if let Some(x) = system.particular(&rhs)? {
            roots.push(Root::from_parts(to_i64_vec(&x)?, target)?);
        }
    }
    Ok(RootSystem::from_roots(config.clone(), roots, false))
}

/// The `2m + 2m(m−1)` vectors of squared length 1 or 2 in `{0, ±1}ᵐ`.
fn root_targets(m: usize) -> impl Iterator<Item = Vec<i64>> {
    let unit = move |entries: &[(usize, i64)]| {
        let mut t = vec![0i64; m];
        for &(i, s) in entries {
            t[i] = s;
        }
        t
    };
    let singles = (0..m).flat_map(move |i| [1, -1].map(|s| unit(&[(i, s)])));
    let pairs = (0..m).flat_map(move |i| {
        (i + 1..m).flat_map(move |j| {
            [(1, 1), (1, -1), (-1, 1), (-1, -1)].map(|(s, t)| unit(&[(i, s), (j, t)]))
        })
    });
    singles.chain(pairs)
}

/// Roots of the signed configuration `{εᵢ vᵢ}` whose pairing has exactly one
/// `+1` and one `−1`.
pub fn compute_signed_roots(
    config: &VectorConfiguration,
    signs: &SignAssignment,
) -> Result<RootSystem> {
    let signed = config.apply_signs(signs)?;
    let all = compute_roots(&signed)?;
    let kept: Vec<&Root> = all
        .roots()
        .iter()
        .filter(|r| r.has_opposite_signs())
        .collect();
    Ok(all.restrict(kept))
}

/// `a_{β,α} = 2(β, α)/(α, α)`.
pub fn cartan_integer(beta: &Root, alpha: &Root) -> Result<i64> {
    let num = 2 * beta.form(alpha);
    let den = alpha.squared_length();
    if den == 0 {
        return Err(Error::InvariantViolation(format!(
            "root {alpha} has zero length"
        )));
    }
    if num % den != 0 {
        return Err(Error::InvariantViolation(format!(
            "non-integral Cartan number 2({beta},{alpha})/({alpha},{alpha}) = {num}/{den}"
        )));
    }
    Ok(num / den)
}

/// `r_α(β) = β − a_{β,α}·α`.
pub fn reflect(alpha: &Root, beta: &Root) -> Result<Root> {
    if alpha.alpha.len() != beta.alpha.len() || alpha.pairing.len() != beta.pairing.len() {
        return Err(Error::DimensionMismatch(
            "roots over different configurations".into(),
        ));
    }
    let c = cartan_integer(beta, alpha)?;
    let image_alpha = beta
        .alpha
        .iter()
        .zip(&alpha.alpha)
        .map(|(b, a)| b - c * a)
        .collect();
    let image_pairing = beta
        .pairing
        .iter()
        .zip(&alpha.pairing)
        .map(|(b, a)| b - c * a)
        .collect();
    Root::from_parts(image_alpha, image_pairing)
}

/// The coroots `2α/(α, α)`. Applying this twice gives back the input.
pub fn dual(system: &RootSystem) -> Result<RootSystem> {
    let roots = system
        .roots
        .iter()
        .map(|r| {
            let len = r.squared_length();
            let scale = |v: &[i64]| -> Result<Vec<i64>> {
                v.iter()
                    .map(|&x| {
                        if (2 * x) % len != 0 {
                            Err(Error::InvariantViolation(format!(
                                "coroot of {r} is not integral"
                            )))
                        } else {
                            Ok(2 * x / len)
                        }
                    })
                    .collect()
            };
            Ok(Root {
                alpha: scale(&r.alpha)?,
                pairing: scale(&r.pairing)?,
                kind: r.kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RootSystem::from_roots(
        system.configuration.clone(),
        roots,
        !system.dual,
    ))
}

/// Default ceiling on the brute-force search box.
pub const ORACLE_CANDIDATE_LIMIT: u128 = 2_000_000_000;

/// Per-coordinate bounds on every root.
///
/// For any `n` vectors `S` of full rank, a root satisfies `S·α = c` with
/// `c ∈ {−1, 0, 1}ⁿ`, so by Cramer's rule
/// `|α_k| ≤ Σ_j |adj(S)_{kj}| / |det S|`. The subset with the smallest box
/// is used.
pub fn oracle_bounds(config: &VectorConfiguration) -> Result<Vec<i64>> {
    let n = config.rank();
    let m = config.len();
    let mut best: Option<(u128, Vec<i64>)> = None;
    for subset in combinations(m, n) {
        let s = config.matrix().select_rows(&subset);
        let det = determinant(&s)?;
        if det.is_zero() {
            continue;
        }
        let mut bounds = Vec::with_capacity(n);
        for k in 0..n {
            // column k of adj(S) = cofactors C_{jk}
            let mut total = BigInt::zero();
            for j in 0..n {
                total += cofactor(&s, j, k)?.abs();
            }
            let b = (total / det.abs())
                .to_i64()
                .ok_or_else(|| Error::Overflow("oracle bound".into()))?;
            bounds.push(b);
        }
        let size = box_size(&bounds);
        if best.as_ref().is_none_or(|(s, _)| size < *s) {
            best = Some((size, bounds));
        }
    }
    best.map(|(_, b)| b).ok_or(Error::RankDeficient {
        rank: 0,
        expected: n,
    })
}

fn box_size(bounds: &[i64]) -> u128 {
    bounds
        .iter()
        .fold(1u128, |acc, &b| acc.saturating_mul(2 * b as u128 + 1))
}

fn cofactor(s: &IntegerMatrix, row: usize, col: usize) -> Result<BigInt> {
    let n = s.rows();
    if n == 1 {
        return Ok(BigInt::from(1));
    }
    let rows: Vec<Vec<BigInt>> = (0..n)
        .filter(|&i| i != row)
        .map(|i| {
            (0..n)
                .filter(|&j| j != col)
                .map(|j| s[(i, j)].clone())
                .collect()
        })
        .collect();
    let minor = determinant(&IntegerMatrix::from_big_rows(rows, n - 1)?)?;
    Ok(if (row + col).is_multiple_of(2) { minor } else { -minor })
}

pub(crate) fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Roots by exhaustive search over the box from [`oracle_bounds`], checking
/// the type 1 / type 2 patterns directly on each candidate.
pub fn oracle_roots(config: &VectorConfiguration) -> Result<RootSystem> {
    oracle_roots_with_limit(config, ORACLE_CANDIDATE_LIMIT)
}

pub fn oracle_roots_with_limit(config: &VectorConfiguration, limit: u128) -> Result<RootSystem> {
    let bounds = oracle_bounds(config)?;
    let candidates = box_size(&bounds);
    if candidates > limit {
        return Err(Error::ScaleError { candidates, limit });
    }
    let n = config.rank();
    let vs = config.vectors();

    let mut alpha: Vec<i64> = bounds.iter().map(|b| -b).collect();
    let mut pairing: Vec<i64> = vs
        .iter()
        .map(|v| v.iter().zip(&alpha).map(|(a, b)| a * b).sum())
        .collect();
    let mut roots = Vec::new();
    loop {
        if is_root_pattern(&pairing) {
            roots.push(Root::from_parts(alpha.clone(), pairing.clone())?);
        }
        // odometer step, keeping the pairing vector in sync
        let mut k = 0;
        loop {
            if k == n {
                return Ok(RootSystem::from_roots(config.clone(), roots, false));
            }
            if alpha[k] < bounds[k] {
                alpha[k] += 1;
                for (p, v) in pairing.iter_mut().zip(vs) {
                    *p += v[k];
                }
                break;
            }
            let span = 2 * bounds[k];
            alpha[k] = -bounds[k];
            for (p, v) in pairing.iter_mut().zip(vs) {
                *p -= span * v[k];
            }
            k += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum ClosureViolation {
    MissingNegation {
        alpha: Vec<i64>,
    },
    NonIntegralCartan {
        alpha: Vec<i64>,
        beta: Vec<i64>,
    },
    MissingReflection {
        alpha: Vec<i64>,
        beta: Vec<i64>,
        image: Vec<i64>,
    },
}

impl fmt::Display for ClosureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosureViolation::MissingNegation { alpha } => {
                write!(f, "-{} missing for {}", fmt_vec(alpha), fmt_vec(alpha))
            }
            ClosureViolation::NonIntegralCartan { alpha, beta } => write!(
                f,
                "Cartan number of {} against {} is not an integer",
                fmt_vec(beta),
                fmt_vec(alpha)
            ),
            ClosureViolation::MissingReflection { alpha, beta, image } => write!(
                f,
                "reflection of {} in {} gives {}, which is missing",
                fmt_vec(beta),
                fmt_vec(alpha),
                fmt_vec(image)
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub negation_closed: bool,
    pub reflection_closed: bool,
    /// First violation found, negation checks first.
    pub first_violation: Option<ClosureViolation>,
}

impl ClosureReport {
    pub fn is_closed(&self) -> bool {
        self.negation_closed && self.reflection_closed
    }
}

/// Checks closure under `α ↦ −α` and under every reflection `r_α`.
pub fn verify_closure(system: &RootSystem) -> ClosureReport {
    let alphas: HashSet<&[i64]> = system.roots.iter().map(|r| r.alpha.as_slice()).collect();
    let mut first = None;

    let mut negation_closed = true;
    for r in &system.roots {
        let neg: Vec<i64> = r.alpha.iter().map(|x| -x).collect();
        if !alphas.contains(neg.as_slice()) {
            negation_closed = false;
            first.get_or_insert(ClosureViolation::MissingNegation {
                alpha: r.alpha.clone(),
            });
            break;
        }
    }

    let mut reflection_closed = true;
    'outer: for a in &system.roots {
        for b in &system.roots {
            let violation = match reflect(a, b) {
                Ok(img) if alphas.contains(img.alpha.as_slice()) => continue,
                Ok(img) => ClosureViolation::MissingReflection {
                    alpha: a.alpha.clone(),
                    beta: b.alpha.clone(),
                    image: img.alpha,
                },
                Err(_) => ClosureViolation::NonIntegralCartan {
                    alpha: a.alpha.clone(),
                    beta: b.alpha.clone(),
                },
            };
            reflection_closed = false;
            first.get_or_insert(violation);
            break 'outer;
        }
    }

    ClosureReport {
        negation_closed,
        reflection_closed,
        first_violation: first,
    }
}

/// Distinct supports of the type-2 roots.
pub fn type2_supports(system: &RootSystem) -> BTreeSet<(usize, usize)> {
    system
        .roots()
        .iter()
        .filter(|r| r.kind() == RootKind::Type2)
        .map(|r| {
            let s = r.support();
            (s[0], s[1])
        })
        .collect()
}
