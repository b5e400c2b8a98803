use crate::error::{Error, Result};

/// Row-major binary spike matrix, one row per time step.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpikeRaster {
    n: usize,
    rows: usize,
    data: Vec<bool>,
}

impl SpikeRaster {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            rows: 0,
            data: Vec::new(),
        }
    }

    pub fn from_rows<R: AsRef<[bool]>>(rows: &[R]) -> Result<Self> {
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut raster = Self::new(n);
        for r in rows {
            raster.push_row(r.as_ref())?;
        }
        Ok(raster)
    }

    pub fn push_row(&mut self, row: &[bool]) -> Result<()> {
        if row.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: row.len(),
            });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.n == 0
    }

    pub fn row(&self, t: usize) -> &[bool] {
        &self.data[t * self.n..(t + 1) * self.n]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[bool]> + '_ {
        // chunks_exact(0) panics, and a zero-width raster has no meaningful rows
        let width = self.n.max(1);
        self.data
            .chunks_exact(width)
            .take(if self.n == 0 { 0 } else { self.rows })
    }

    pub fn get(&self, t: usize, neuron: usize) -> bool {
        self.data[t * self.n + neuron]
    }

    pub fn total_spikes(&self) -> usize {
        self.data.iter().filter(|&&s| s).count()
    }

    /// The last `window` rows as a new raster.
    pub fn tail(&self, window: usize) -> SpikeRaster {
        let window = window.min(self.rows);
        let start = (self.rows - window) * self.n;
        SpikeRaster {
            n: self.n,
            rows: window,
            data: self.data[start..].to_vec(),
        }
    }

    /// Same raster with columns reordered: new column `c` is old `perm[c]`.
    pub fn permute_columns(&self, perm: &[usize]) -> SpikeRaster {
        let mut out = SpikeRaster::new(self.n);
        for row in self.iter_rows() {
            let r: Vec<bool> = perm.iter().map(|&c| row[c]).collect();
            out.data.extend(r);
            out.rows += 1;
        }
        out
    }
}
