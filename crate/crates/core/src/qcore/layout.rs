use crate::error::{Error, Result};

/// Ordered tensor-factor layout. The first factor is the most significant
/// digit of a flat basis index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsystemLayout {
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl SubsystemLayout {
    pub fn new(dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if dims.len() != labels.len() {
            return Err(Error::Layout(format!(
                "{} dims but {} labels",
                dims.len(),
                labels.len()
            )));
        }
        if dims.is_empty() {
            return Err(Error::Layout("no factors".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::Layout(format!("factor dimension {d}")));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::Layout(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self { dims, labels })
    }

    /// Qubit factors with the given labels.
    pub fn qubits<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::new(
            vec![2; labels.len()],
            labels.iter().map(|s| s.as_ref().to_string()).collect(),
        )
    }

    /// System qubit `S` followed by environment qubits `E1..En`.
    pub fn system_environment(n: usize) -> Self {
        let mut labels = vec!["S".to_string()];
        labels.extend((1..=n).map(env_label));
        Self {
            dims: vec![2; n + 1],
            labels,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Self::new(dims, labels)
    }

    /// Sub-layout with the given factor positions, in ascending order.
    pub(crate) fn select(&self, positions: &[usize]) -> Self {
        Self {
            dims: positions.iter().map(|&p| self.dims[p]).collect(),
            labels: positions.iter().map(|&p| self.labels[p].clone()).collect(),
        }
    }

    /// Resolves labels to sorted, deduplicated factor positions.
    pub(crate) fn positions<S: AsRef<str>>(&self, keep: &[S]) -> Result<Vec<usize>> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        let mut pos = keep
            .iter()
            .map(|l| self.index_of(l.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        pos.sort_unstable();
        pos.dedup();
        Ok(pos)
    }

    /// Flat-index map splitting the factors into `kept` and the rest:
    /// entry `k * d_rest + r` holds the full index of kept index `k` and rest index `r`.
    pub(crate) fn split_index_map(&self, kept: &[usize]) -> (usize, usize, Vec<usize>) {
        let n = self.dims.len();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        let rest: Vec<usize> = (0..n).filter(|i| !kept.contains(i)).collect();
        let d_keep: usize = kept.iter().map(|&i| self.dims[i]).product();
        let d_rest: usize = rest.iter().map(|&i| self.dims[i]).product();
        let offsets = |factors: &[usize], count: usize| -> Vec<usize> {
            (0..count)
                .map(|mut idx| {
                    let mut full = 0;
                    for &f in factors.iter().rev() {
                        full += (idx % self.dims[f]) * strides[f];
                        idx /= self.dims[f];
                    }
                    full
                })
                .collect()
        };
        let keep_off = offsets(kept, d_keep);
        let rest_off = offsets(&rest, d_rest);
        let mut map = Vec::with_capacity(d_keep * d_rest);
        for k in &keep_off {
            for r in &rest_off {
                map.push(k + r);
            }
        }
        (d_keep, d_rest, map)
    }
}

pub(crate) fn env_label(i: usize) -> String {
    format!("E{i}")
}
