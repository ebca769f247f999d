//! Finite vector configurations in a lattice of rank `n`, and sign data.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, IntegerMatrix};

/// Ordered nonzero vectors `v₁ … v_m` spanning a full-rank subgroup of `Zⁿ`.
///
/// Duplicates are allowed and order is significant: roots, supports and
/// partitions refer to vectors by position.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawConfiguration", into = "RawConfiguration")]
pub struct VectorConfiguration {
    rank: usize,
    vectors: Vec<Vec<i64>>,
    labels: Option<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct RawConfiguration {
    rank: usize,
    vectors: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawConfiguration> for VectorConfiguration {
    type Error = Error;

    fn try_from(raw: RawConfiguration) -> Result<Self> {
        let cfg = VectorConfiguration::new(raw.rank, raw.vectors)?;
        match raw.labels {
            Some(labels) => cfg.with_labels(labels),
            None => Ok(cfg),
        }
    }
}

impl From<VectorConfiguration> for RawConfiguration {
    fn from(cfg: VectorConfiguration) -> Self {
        RawConfiguration {
            rank: cfg.rank,
            vectors: cfg.vectors,
            labels: cfg.labels,
        }
    }
}

impl VectorConfiguration {
    /// Validates and builds a configuration.
    pub fn new(rank: usize, vectors: Vec<Vec<i64>>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptyConfiguration);
        }
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != rank {
                return Err(Error::DimensionMismatch(format!(
                    "vector {} has length {}, rank is {}",
                    i + 1,
                    v.len(),
                    rank
                )));
            }
        }
        if let Some(index) = vectors.iter().position(|v| v.iter().all(|&x| x == 0)) {
            return Err(Error::ZeroVector { index });
        }
        let got = lattice::rank(&IntegerMatrix::from_rows(&vectors)?);
        if got != rank {
            return Err(Error::RankDeficient {
                rank: got,
                expected: rank,
            });
        }
        Ok(VectorConfiguration {
            rank,
            vectors,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.vectors.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} vectors",
                labels.len(),
                self.vectors.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Ambient lattice rank `n`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of vectors `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }

    pub fn vector(&self, i: usize) -> &[i64] {
        &self.vectors[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// The `m × n` matrix whose rows are the vectors.
    pub fn matrix(&self) -> IntegerMatrix {
        IntegerMatrix::from_rows(&self.vectors).expect("validated configuration is rectangular")
    }

    /// Index of the subgroup generated by the vectors in `Zⁿ`; 1 when they
    /// span the lattice. Several structural statements about `R(V)` (halves
    /// of conjugate pairs being roots, components being only A or B) need
    /// index 1 and fail otherwise.
    pub fn lattice_index(&self) -> num_bigint::BigInt {
        let (h, _) = lattice::hermite_normal_form(&self.matrix());
        (0..self.rank).map(|k| h[(k, k)].clone()).product()
    }

    /// Replaces `vᵢ` by `εᵢ·vᵢ`.
    pub fn apply_signs(&self, signs: &SignAssignment) -> Result<Self> {
        if signs.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} signs for {} vectors",
                signs.len(),
                self.len()
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .zip(signs.signs())
            .map(|(v, s)| v.iter().map(|&x| x * s.value()).collect())
            .collect();
        Ok(VectorConfiguration {
            rank: self.rank,
            vectors,
            labels: self.labels.clone(),
        })
    }

    /// The rank-`n` configuration `{e₁, …, eₙ}`.
    pub fn standard_basis(n: usize) -> Self {
        let vectors = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        VectorConfiguration::new(n, vectors).expect("standard basis is valid")
    }

    /// `{e₁, …, eₙ, −Σeᵢ}`, the rays of projective `n`-space.
    pub fn projective(n: usize) -> Self {
        let mut vectors = Self::standard_basis(n).vectors;
        vectors.push(vec![-1; n]);
        VectorConfiguration::new(n, vectors).expect("projective configuration is valid")
    }
}

impl fmt::Display for VectorConfiguration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vectors.iter().map(|v| fmt_vec(v)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

pub(crate) fn fmt_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Signs `ε₁ … ε_m`, one per configuration vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignAssignment {
    signs: Vec<Sign>,
}

impl SignAssignment {
    pub fn new(signs: Vec<Sign>) -> Self {
        SignAssignment { signs }
    }

    pub fn all_plus(m: usize) -> Self {
        SignAssignment::new(vec![Sign::Plus; m])
    }

    /// `+1` on the first `q` entries and `−1` on the remaining `m − q`.
    pub fn block(q: usize, m: usize) -> Result<Self> {
        if q > m {
            return Err(Error::InvalidInput(format!("q = {q} exceeds m = {m}")));
        }
        let signs = (0..m)
            .map(|i| if i < q { Sign::Plus } else { Sign::Minus })
            .collect();
        Ok(SignAssignment { signs })
    }

    pub fn from_values(values: &[i64]) -> Result<Self> {
        values
            .iter()
            .map(|&v| match v {
                1 => Ok(Sign::Plus),
                -1 => Ok(Sign::Minus),
                _ => Err(Error::InvalidInput(format!(
                    "sign must be +1 or -1, got {v}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(SignAssignment::new)
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn negated(&self) -> Self {
        SignAssignment::new(self.signs.iter().map(|s| s.flip()).collect())
    }

    /// Every assignment of length `m`, in binary order with `+` first.
    pub fn enumerate(m: usize) -> impl Iterator<Item = SignAssignment> {
        (0u64..1 << m).map(move |bits| {
            SignAssignment::new(
                (0..m)
                    .map(|i| {
                        if bits >> i & 1 == 0 {
                            Sign::Plus
                        } else {
                            Sign::Minus
                        }
                    })
                    .collect(),
            )
        })
    }
}

/// Parsed form of a sign specification on the command line: either an
/// explicit list (`+,-,+`) or a block pattern (`q=2`) whose length is only
/// known once the configuration is.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignSpec {
    Explicit(SignAssignment),
    Block(usize),
}

impl SignSpec {
    pub fn resolve(&self, m: usize) -> Result<SignAssignment> {
        match self {
            SignSpec::Explicit(s) if s.len() == m => Ok(s.clone()),
            SignSpec::Explicit(s) => Err(Error::DimensionMismatch(format!(
                "{} signs for {} vectors",
                s.len(),
                m
            ))),
            SignSpec::Block(q) => SignAssignment::block(*q, m),
        }
    }
}

impl FromStr for SignSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(q) = s.strip_prefix("q=") {
            return q
                .trim()
                .parse()
                .map(SignSpec::Block)
                .map_err(|_| Error::InvalidInput(format!("bad block size in {s:?}")));
        }
        s.split(',')
            .map(|tok| match tok.trim() {
                "+" | "+1" | "1" => Ok(Sign::Plus),
                "-" | "-1" => Ok(Sign::Minus),
                other => Err(Error::InvalidInput(format!("bad sign {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(|v| SignSpec::Explicit(SignAssignment::new(v)))
    }
}

impl fmt::Display for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .signs
            .iter()
            .map(|s| match s {
                Sign::Plus => "+",
                Sign::Minus => "-",
            })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn standard_basis_is_valid() {
        let cfg = VectorConfiguration::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(cfg.len(), 2);
        assert_eq!(cfg, VectorConfiguration::standard_basis(2));
    }

    #[test]
    fn lattice_index() {
        assert_eq!(VectorConfiguration::projective(3).lattice_index(), 1.into());
        let cfg = VectorConfiguration::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
        assert_eq!(cfg.lattice_index(), 2.into());
        let cfg = VectorConfiguration::new(2, vec![vec![2, 0], vec![0, 3], vec![1, 1]]).unwrap();
        assert_eq!(cfg.lattice_index(), 1.into());
    }

    #[test]
    fn collinear_is_rank_deficient() {
        assert_eq!(
            VectorConfiguration::new(2, vec![vec![1, 0], vec![2, 0]]),
            Err(Error::RankDeficient {
                rank: 1,
                expected: 2
            })
        );
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(
            VectorConfiguration::new(2, vec![vec![1, 0], vec![0, 0]]),
            Err(Error::ZeroVector { index: 1 })
        );
    }

    #[test]
    fn empty_and_ragged_rejected() {
        assert_eq!(
            VectorConfiguration::new(2, vec![]),
            Err(Error::EmptyConfiguration)
        );
        assert!(matches!(
            VectorConfiguration::new(2, vec![vec![1, 0], vec![1]]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn duplicates_allowed() {
        assert!(VectorConfiguration::new(1, vec![vec![1], vec![1]]).is_ok());
    }

    #[test]
    fn sign_application() {
        let cfg = VectorConfiguration::standard_basis(2);
        let same = cfg
            .apply_signs(&SignAssignment::from_values(&[1, 1]).unwrap())
            .unwrap();
        assert_eq!(same, cfg);
        let flipped = cfg
            .apply_signs(&SignAssignment::from_values(&[1, -1]).unwrap())
            .unwrap();
        assert_eq!(flipped.vectors(), &[vec![1, 0], vec![0, -1]]);

        let cp2 = VectorConfiguration::projective(2);
        let neg = cp2
            .apply_signs(&SignAssignment::block(0, 3).unwrap())
            .unwrap();
        assert_eq!(neg.vectors(), &[vec![-1, 0], vec![0, -1], vec![1, 1]]);

        assert!(matches!(
            cfg.apply_signs(&SignAssignment::all_plus(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn labels_survive_signs_and_json() {
        let cfg = VectorConfiguration::standard_basis(2)
            .with_labels(vec!["a".into(), "b".into()])
            .unwrap();
        let flipped = cfg
            .apply_signs(&SignAssignment::block(1, 2).unwrap())
            .unwrap();
        assert_eq!(flipped.labels(), cfg.labels());

        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(
            json,
            r#"{"rank":2,"vectors":[[1,0],[0,1]],"labels":["a","b"]}"#
        );
        let back: VectorConfiguration = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn json_input_is_validated() {
        let err =
            serde_json::from_str::<VectorConfiguration>(r#"{"rank":2,"vectors":[[1,0],[2,0]]}"#)
                .unwrap_err();
        assert!(err.to_string().contains("rank 1"));
    }

    #[test]
    fn sign_spec_parsing() {
        assert_eq!(
            "+,-,+,+".parse::<SignSpec>().unwrap().resolve(4).unwrap(),
            SignAssignment::from_values(&[1, -1, 1, 1]).unwrap()
        );
        assert_eq!(
            "q=2".parse::<SignSpec>().unwrap().resolve(4).unwrap(),
            SignAssignment::from_values(&[1, 1, -1, -1]).unwrap()
        );
        assert!("+,x".parse::<SignSpec>().is_err());
        assert!("q=5".parse::<SignSpec>().unwrap().resolve(4).is_err());
        assert!("+,-".parse::<SignSpec>().unwrap().resolve(3).is_err());
    }

    fn config_and_signs() -> impl Strategy<Value = (VectorConfiguration, SignAssignment)> {
        (1usize..=3, 0usize..=3)
            .prop_flat_map(|(n, extra)| {
                (
                    Just(n),
                    prop::collection::vec(prop::collection::vec(-3i64..=3, n), n + extra),
                    prop::collection::vec(prop::bool::ANY, n + extra),
                )
            })
            .prop_filter_map("invalid configuration", |(n, vecs, bits)| {
                let cfg = VectorConfiguration::new(n, vecs).ok()?;
                let signs = bits
                    .into_iter()
                    .map(|b| if b { Sign::Plus } else { Sign::Minus })
                    .collect();
                Some((cfg, SignAssignment::new(signs)))
            })
    }

    proptest! {
        #[test]
        fn signs_are_an_involution((cfg, signs) in config_and_signs()) {
            let twice = cfg.apply_signs(&signs).unwrap().apply_signs(&signs).unwrap();
            prop_assert_eq!(twice, cfg);
        }

        #[test]
        fn signs_preserve_validity((cfg, signs) in config_and_signs()) {
            let flipped = cfg.apply_signs(&signs).unwrap();
            prop_assert!(VectorConfiguration::new(flipped.rank(), flipped.vectors().to_vec()).is_ok());
        }
    }
}
