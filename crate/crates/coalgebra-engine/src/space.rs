use crate::CoalgError;
use exact_linear::{Rat, Subspace, Vector};

/// A basis organized into grade blocks. Grade indices are strictly
/// increasing but may skip values; every block is non-empty and labels are
/// unique across the whole space. Flat basis indices run through the blocks
/// in order, so the block layout fixes the matrix conventions everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedSpace {
    blocks: Vec<(usize, Vec<String>)>,
    total_dim: usize,
}

impl GradedSpace {
    pub fn new(blocks: Vec<(usize, Vec<String>)>) -> Result<Self, CoalgError> {
        if blocks.is_empty() {
            return Err(CoalgError::BadSpace("no grade blocks".into()));
        }
        let mut total = 0usize;
        let mut seen = std::collections::BTreeSet::new();
        for (i, (grade, labels)) in blocks.iter().enumerate() {
            if labels.is_empty() {
                return Err(CoalgError::BadSpace(format!("grade {grade} block is empty")));
            }
            if i > 0 && blocks[i - 1].0 >= *grade {
                return Err(CoalgError::BadSpace(format!(
                    "grade indices must be strictly increasing ({} then {})",
                    blocks[i - 1].0, grade
                )));
            }
            for label in labels {
                if !seen.insert(label.clone()) {
                    return Err(CoalgError::BadSpace(format!("duplicate label {label:?}")));
                }
            }
            total += labels.len();
        }
        Ok(GradedSpace { blocks, total_dim: total })
    }

    /// Single block in grade zero; the shape used when no grading is claimed.
    pub fn ungraded(labels: Vec<String>) -> Result<Self, CoalgError> {
        GradedSpace::new(vec![(0, labels)])
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn blocks(&self) -> &[(usize, Vec<String>)] {
        &self.blocks
    }

    pub fn top_grade(&self) -> usize {
        self.blocks.last().expect("non-empty").0
    }

    /// Grade of the flat basis index `i`.
    pub fn grade_of(&self, i: usize) -> usize {
        let mut offset = 0;
        for (grade, labels) in &self.blocks {
            if i < offset + labels.len() {
                return *grade;
            }
            offset += labels.len();
        }
        panic!("basis index {i} out of range for dimension {}", self.total_dim);
    }

    /// Flat index range of the block in grade `k`, or None if the grade is absent.
    pub fn grade_range(&self, k: usize) -> Option<std::ops::Range<usize>> {
        let mut offset = 0;
        for (grade, labels) in &self.blocks {
            if *grade == k {
                return Some(offset..offset + labels.len());
            }
            offset += labels.len();
        }
        None
    }

    pub fn label(&self, i: usize) -> &str {
        let mut offset = 0;
        for (_, labels) in &self.blocks {
            if i < offset + labels.len() {
                return &labels[i - offset];
            }
            offset += labels.len();
        }
        panic!("basis index {i} out of range for dimension {}", self.total_dim);
    }

    pub fn labels(&self) -> Vec<&str> {
        self.blocks.iter().flat_map(|(_, ls)| ls.iter().map(|s| s.as_str())).collect()
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        let mut offset = 0;
        for (_, labels) in &self.blocks {
            if let Some(p) = labels.iter().position(|l| l == label) {
                return Some(offset + p);
            }
            offset += labels.len();
        }
        None
    }

    /// Replaces every label, keeping the block structure. Lengths must match.
    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self, CoalgError> {
        if labels.len() != self.total_dim {
            return Err(CoalgError::BadSpace(format!(
                "{} labels supplied for dimension {}",
                labels.len(),
                self.total_dim
            )));
        }
        let mut it = labels.into_iter();
        let blocks = self
            .blocks
            .iter()
            .map(|(g, ls)| (*g, (0..ls.len()).map(|_| it.next().expect("length checked")).collect()))
            .collect();
        GradedSpace::new(blocks)
    }

    /// Span of all blocks of grade at most `k`.
    pub fn span_of_grades_le(&self, k: usize) -> Subspace {
        let mut vs = Vec::new();
        let mut offset = 0;
        for (grade, labels) in &self.blocks {
            if *grade <= k {
                for i in 0..labels.len() {
                    vs.push(Vector::unit(self.total_dim, offset + i));
                }
            }
            offset += labels.len();
        }
        Subspace::from_vectors(self.total_dim, &vs)
    }

    /// Renders a vector as a signed combination of labeled basis elements.
    pub fn format_vector(&self, v: &Vector) -> String {
        assert_eq!(v.dim(), self.total_dim, "vector dimension mismatch");
        if v.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in v.iter() {
            let label = self.label(i);
            if out.is_empty() {
                if c == &Rat::one() {
                    out.push_str(label);
                } else if c == &(-Rat::one()) {
                    out.push_str(&format!("-{label}"));
                } else {
                    out.push_str(&format!("{c}*{label}"));
                }
            } else if c == &Rat::one() {
                out.push_str(&format!(" + {label}"));
            } else if c == &(-Rat::one()) {
                out.push_str(&format!(" - {label}"));
            } else if c.is_negative() {
                out.push_str(&format!(" - {}*{label}", -c));
            } else {
                out.push_str(&format!(" + {c}*{label}"));
            }
        }
        out
    }
}
