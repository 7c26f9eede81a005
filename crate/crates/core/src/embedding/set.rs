use std::collections::HashMap;

use super::EmbeddingError;

/// A finite, non-empty real vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn new(values: Vec<f64>) -> Result<Self, EmbeddingError> {
        if values.is_empty() {
            return Err(EmbeddingError::EmptyVector);
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(EmbeddingError::NonFinite { index });
        }
        Ok(Self { values })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn dot(&self, other: &Self) -> Result<f64, EmbeddingError> {
        self.check_dim(other)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<(), EmbeddingError> {
        if self.dim() != other.dim() {
            return Err(EmbeddingError::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<f64>> for EmbeddingVector {
    type Error = EmbeddingError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Self::new(values)
    }
}

/// Token-to-vector collection with a shared dimension. Insertion order is
/// preserved so downstream iteration is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    model_id: String,
    dim: usize,
    tokens: Vec<String>,
    vectors: Vec<EmbeddingVector>,
    index: HashMap<String, usize>,
}

impl EmbeddingSet {
    pub fn new(model_id: impl Into<String>, dim: usize) -> Self {
        Self {
            model_id: model_id.into(),
            dim,
            tokens: Vec::new(),
            vectors: Vec::new(),
            index: HashMap::new(),
        }
    }

    /// Builds a set whose dimension is taken from the first entry.
    pub fn from_entries<I>(model_id: impl Into<String>, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (String, EmbeddingVector)>,
    {
        let mut iter = entries.into_iter().peekable();
        let dim = iter.peek().map(|(_, v)| v.dim()).unwrap_or(0);
        let mut set = Self::new(model_id, dim);
        for (token, vector) in iter {
            set.insert(token, vector)?;
        }
        Ok(set)
    }

    pub fn insert(&mut self, token: String, vector: EmbeddingVector) -> Result<(), EmbeddingError> {
        if self.tokens.is_empty() && self.dim == 0 {
            self.dim = vector.dim();
        }
        if vector.dim() != self.dim {
            return Err(EmbeddingError::TokenDimensionMismatch {
                token,
                expected: self.dim,
                actual: vector.dim(),
            });
        }
        if self.index.contains_key(&token) {
            return Err(EmbeddingError::DuplicateToken(token));
        }
        self.index.insert(token.clone(), self.tokens.len());
        self.tokens.push(token);
        self.vectors.push(vector);
        Ok(())
    }

    pub fn model_id(&self) -> &str {
        &self.model_id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&EmbeddingVector> {
        self.index.get(token).map(|&i| &self.vectors[i])
    }

    pub fn require(&self, token: &str) -> Result<&EmbeddingVector, EmbeddingError> {
        self.get(token)
            .ok_or_else(|| EmbeddingError::UnknownToken(token.to_string()))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &EmbeddingVector)> {
        self.tokens.iter().map(String::as_str).zip(&self.vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[f64]) -> EmbeddingVector {
        EmbeddingVector::new(xs.to_vec()).unwrap()
    }

    #[test]
    fn rejects_non_finite_and_empty() {
        assert!(matches!(
            EmbeddingVector::new(vec![1.0, f64::NAN]),
            Err(EmbeddingError::NonFinite { index: 1 })
        ));
        assert!(matches!(EmbeddingVector::new(vec![]), Err(EmbeddingError::EmptyVector)));
    }

    #[test]
    fn insert_enforces_dimension_and_uniqueness() {
        let mut set = EmbeddingSet::new("m", 2);
        set.insert("a".into(), v(&[1.0, 0.0])).unwrap();
        match set.insert("b".into(), v(&[1.0, 0.0, 0.0])) {
            Err(EmbeddingError::TokenDimensionMismatch { token, .. }) => assert_eq!(token, "b"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            set.insert("a".into(), v(&[0.0, 1.0])),
            Err(EmbeddingError::DuplicateToken(_))
        ));
        assert_eq!(set.len(), 1);
    }

    #[test]
    fn preserves_insertion_order() {
        let set = EmbeddingSet::from_entries(
            "m",
            ["z", "a", "m"].iter().map(|t| (t.to_string(), v(&[1.0]))),
        )
        .unwrap();
        assert_eq!(set.tokens(), &["z", "a", "m"]);
    }
}
