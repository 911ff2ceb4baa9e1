//! Word-embedding table and cosine semantic similarity.
//!
//! The table is the source of the `s` column of the state matrix: the
//! similarity between a detected object's class and the navigation target.
//! It is immutable after parsing and safe to share across workers.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::math;

#[derive(Debug, thiserror::Error)]
pub enum EmbedError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Validation(String),
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("vector length mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero-norm vector")]
    ZeroNorm,
}

/// Cosine similarity of two embedding vectors, clamped to [-1, 1] to absorb
/// floating-point overshoot.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> Result<f64, EmbedError> {
    if a.len() != b.len() {
        return Err(EmbedError::DimensionMismatch(a.len(), b.len()));
    }
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(EmbedError::ZeroNorm);
    }
    // sqrt(na * nb) rather than sqrt(na) * sqrt(nb): for identical inputs
    // the accumulations are bit-equal, and sqrt(fl(x*x)) == x exactly, so
    // the identity case yields exactly 1.0
    Ok((dot / math::sqrt(na * nb)).clamp(-1.0, 1.0))
}

/// Per-class word embeddings, all of one dimensionality, keyed by
/// lower-cased class name.
#[derive(Debug, Clone)]
pub struct EmbeddingTable {
    dim: usize,
    entries: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    /// Parse the plain-text format: one `token v_1 ... v_D` record per line,
    /// whitespace-separated, `#`-prefixed comment lines and blank lines
    /// ignored. Tokens are lower-cased; a duplicate token keeps the last
    /// record and logs a warning.
    pub fn parse(text: &str) -> Result<Self, EmbedError> {
        let mut dim = None;
        let mut entries: BTreeMap<String, Vec<f64>> = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let token = fields.next().expect("non-empty line").to_lowercase();
            let mut vec = Vec::new();
            for field in fields {
                let value: f64 = field.parse().map_err(|_| EmbedError::Parse {
                    line,
                    msg: alloc::format!("non-numeric field `{field}`"),
                })?;
                if !value.is_finite() {
                    return Err(EmbedError::Parse {
                        line,
                        msg: alloc::format!("non-finite field `{field}`"),
                    });
                }
                vec.push(value);
            }
            if vec.is_empty() {
                return Err(EmbedError::Parse {
                    line,
                    msg: "no vector components".to_string(),
                });
            }
            match dim {
                None => dim = Some(vec.len()),
                Some(d) if d != vec.len() => {
                    return Err(EmbedError::Parse {
                        line,
                        msg: alloc::format!("expected {d} components, found {}", vec.len()),
                    });
                }
                Some(_) => {}
            }
            if vec.iter().all(|v| *v == 0.0) {
                return Err(EmbedError::Validation(alloc::format!(
                    "zero-norm vector for `{token}` (line {line})"
                )));
            }
            if entries.insert(token.clone(), vec).is_some() {
                log::warn!("duplicate embedding for `{token}` (line {line}), keeping last");
            }
        }
        match dim {
            None => Err(EmbedError::Validation("no entries".to_string())),
            Some(dim) => Ok(Self { dim, entries }),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Whether `class` resolves to a vector (directly or via the
    /// multi-word rule).
    pub fn contains(&self, class: &str) -> bool {
        self.vector(class).is_ok()
    }

    /// Embedding vector for a class name. Multi-word names resolve to the
    /// mean of their tokens' vectors; every token must be present.
    pub fn vector(&self, class: &str) -> Result<Vec<f64>, EmbedError> {
        let name = class.to_lowercase();
        if let Some(v) = self.entries.get(&name) {
            return Ok(v.clone());
        }
        let tokens: Vec<&str> = name.split_whitespace().collect();
        if tokens.len() < 2 {
            return Err(EmbedError::UnknownClass(class.to_string()));
        }
        let mut mean = alloc::vec![0.0; self.dim];
        for token in &tokens {
            let v = self
                .entries
                .get(*token)
                .ok_or_else(|| EmbedError::UnknownClass(class.to_string()))?;
            for (m, x) in mean.iter_mut().zip(v) {
                *m += x;
            }
        }
        let inv = 1.0 / tokens.len() as f64;
        for m in &mut mean {
            *m *= inv;
        }
        Ok(mean)
    }

    /// Cosine similarity between two class names.
    pub fn similarity(&self, a: &str, b: &str) -> Result<f64, EmbedError> {
        cosine_similarity(&self.vector(a)?, &self.vector(b)?)
    }

    /// Precompute similarity-to-target for a set of classes. Similarities
    /// are pose-independent, so one table serves a whole episode.
    pub fn similarities_to<'a, I>(
        &self,
        target: &str,
        classes: I,
    ) -> Result<TargetSimilarities, EmbedError>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let target_vec = self.vector(target)?;
        let mut values = BTreeMap::new();
        for class in classes {
            let s = cosine_similarity(&self.vector(class)?, &target_vec)?;
            values.insert(class.to_lowercase(), s);
        }
        // the target itself is always resolvable
        values
            .entry(target.to_lowercase())
            .or_insert_with(|| cosine_similarity(&target_vec, &target_vec).expect("nonzero norm"));
        Ok(TargetSimilarities {
            target: target.to_lowercase(),
            values,
        })
    }
}

/// Cached similarity-to-target for every class that can appear in an
/// episode's detections.
#[derive(Debug, Clone)]
pub struct TargetSimilarities {
    target: String,
    values: BTreeMap<String, f64>,
}

impl TargetSimilarities {
    pub fn target(&self) -> &str {
        &self.target
    }

    pub fn get(&self, class: &str) -> Option<f64> {
        self.values.get(class).copied()
    }

    pub fn is_target(&self, class: &str) -> bool {
        class == self.target
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_reads_back_entries() {
        let table = EmbeddingTable::parse("sink 1 0\ntoaster 0 1\n").unwrap();
        assert_eq!(table.dim(), 2);
        assert_eq!(table.len(), 2);
        assert_eq!(table.vector("sink").unwrap(), vec![1.0, 0.0]);
        assert_eq!(table.vector("Toaster").unwrap(), vec![0.0, 1.0]);
    }

    #[test]
    fn parse_rejects_empty_input() {
        let err = EmbeddingTable::parse("# only a comment\n\n").unwrap_err();
        assert!(matches!(err, EmbedError::Validation(ref m) if m == "no entries"));
    }

    #[test]
    fn parse_names_offending_line() {
        let err = EmbeddingTable::parse("sink 1 0\ntoaster 0 x\n").unwrap_err();
        match err {
            EmbedError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_inconsistent_dim() {
        let err = EmbeddingTable::parse("sink 1 0\ntoaster 0 1 2\n").unwrap_err();
        match err {
            EmbedError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_zero_norm() {
        let err = EmbeddingTable::parse("sink 0 0\n").unwrap_err();
        assert!(matches!(err, EmbedError::Validation(_)));
    }

    #[test]
    fn duplicate_token_keeps_last() {
        let table = EmbeddingTable::parse("sink 1 0\nsink 0 2\n").unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table.vector("sink").unwrap(), vec![0.0, 2.0]);
    }

    #[test]
    fn multi_word_names_use_token_mean() {
        let table = EmbeddingTable::parse("garbage 1 0\ncan 0 1\n").unwrap();
        assert_eq!(table.vector("garbage can").unwrap(), vec![0.5, 0.5]);
        assert!(table.contains("garbage can"));
        assert!(!table.contains("garbage bin"));
    }

    #[test]
    fn cosine_identity_and_orthogonality() {
        assert_eq!(cosine_similarity(&[3.0, 4.0], &[3.0, 4.0]).unwrap(), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn cosine_matches_direct_formula() {
        // independent route: dot and norms accumulated separately
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, 5.0, 6.0];
        let dot: f64 = 1.0 * 4.0 + 2.0 * 5.0 + 3.0 * 6.0;
        let na: f64 = (1.0f64 + 4.0 + 9.0).sqrt();
        let nb: f64 = (16.0f64 + 25.0 + 36.0).sqrt();
        let expected = dot / (na * nb);
        let got = cosine_similarity(&a, &b).unwrap();
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
    }

    #[test]
    fn cosine_rejects_degenerate_inputs() {
        assert!(matches!(
            cosine_similarity(&[1.0], &[1.0, 2.0]),
            Err(EmbedError::DimensionMismatch(1, 2))
        ));
        assert!(matches!(
            cosine_similarity(&[0.0, 0.0], &[1.0, 2.0]),
            Err(EmbedError::ZeroNorm)
        ));
    }

    #[test]
    fn cosine_properties_hold_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let n = rng.gen_range(1..8);
            let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            if a.iter().all(|v| *v == 0.0) || b.iter().all(|v| *v == 0.0) {
                continue;
            }
            let ab = cosine_similarity(&a, &b).unwrap();
            let ba = cosine_similarity(&b, &a).unwrap();
            assert_eq!(ab, ba, "symmetry is exact");
            assert!((-1.0..=1.0).contains(&ab));
            assert_eq!(cosine_similarity(&a, &a).unwrap(), 1.0, "identity is exact");
            let k = rng.gen_range(0.1..10.0);
            let ka: Vec<f64> = a.iter().map(|v| v * k).collect();
            assert!((cosine_similarity(&ka, &b).unwrap() - ab).abs() < 1e-9);
        }
    }

    #[test]
    fn similarities_to_covers_target_and_classes() {
        let table = EmbeddingTable::parse("sink 1 0\ntoaster 0 1\nmug 1 1\n").unwrap();
        let sims = table
            .similarities_to("sink", ["toaster", "mug"])
            .unwrap();
        assert_eq!(sims.get("sink"), Some(1.0));
        assert_eq!(sims.get("toaster"), Some(0.0));
        let mug = sims.get("mug").unwrap();
        assert!((mug - 1.0 / 2.0f64.sqrt()).abs() < 1e-12);
        assert!(sims.is_target("sink"));
        assert!(!sims.is_target("mug"));
    }
}
