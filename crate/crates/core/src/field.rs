//! Discrete space-time fields, time traces and the norms used to measure iteration error.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{usage, Result};

/// Coordinate of node `j` of a grid starting at `x_left`.
///
/// When `x_left` lies on the lattice `ℤ·dx` the node is computed as `k·dx` from its global
/// index, so overlapping grids agree on every shared coordinate to the last bit.
pub fn grid_x(x_left: f64, dx: f64, j: usize) -> f64 {
    lattice_x(x_left, dx, j as f64)
}

/// [`grid_x`] for a possibly negative node offset `j`.
pub(crate) fn lattice_x(x_left: f64, dx: f64, j: f64) -> f64 {
    let offset = x_left / dx;
    let k = libm::round(offset);
    if (offset - k).abs() <= 1e-9 * k.abs().max(1.0) {
        (k + j) * dx
    } else {
        x_left + j * dx
    }
}

/// Values on a vertex-centred grid for every time level of a window.
///
/// Node `j` sits at [`grid_x`]`(x_left, dx, j)`; level `n` at `n * dt`. Storage is row-major by level.
#[derive(Debug, Clone, PartialEq)]
pub struct SpaceTimeField {
    x_left: f64,
    dx: f64,
    dt: f64,
    n_nodes: usize,
    n_time: usize,
    values: Vec<f64>,
}

impl SpaceTimeField {
    pub fn zeros(x_left: f64, dx: f64, dt: f64, n_nodes: usize, n_time: usize) -> Self {
        SpaceTimeField {
            x_left,
            dx,
            dt,
            n_nodes,
            n_time,
            values: alloc::vec![0.0; n_nodes * (n_time + 1)],
        }
    }

    /// Builds a field from `n_time + 1` rows of equal length.
    pub fn from_rows(x_left: f64, dx: f64, dt: f64, rows: &[Vec<f64>]) -> Result<Self> {
        let n_nodes = rows.first().map_or(0, Vec::len);
        if rows.len() < 2 || n_nodes == 0 {
            return Err(usage("a field needs at least two time levels and one node"));
        }
        if rows.iter().any(|r| r.len() != n_nodes) {
            return Err(usage("field rows have unequal lengths"));
        }
        Ok(SpaceTimeField {
            x_left,
            dx,
            dt,
            n_nodes,
            n_time: rows.len() - 1,
            values: rows.concat(),
        })
    }

    /// Samples `u(x, t)` on the grid.
    pub fn sample(x_left: f64, dx: f64, dt: f64, n_nodes: usize, n_time: usize, u: impl Fn(f64, f64) -> f64) -> Self {
        let mut f = Self::zeros(x_left, dx, dt, n_nodes, n_time);
        for n in 0..=n_time {
            let t = n as f64 * dt;
            for (j, v) in f.row_mut(n).iter_mut().enumerate() {
                *v = u(grid_x(x_left, dx, j), t);
            }
        }
        f
    }

    pub fn x_left(&self) -> f64 {
        self.x_left
    }

    pub fn x_right(&self) -> f64 {
        self.node_x(self.n_nodes - 1)
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    pub fn node_x(&self, j: usize) -> f64 {
        grid_x(self.x_left, self.dx, j)
    }

    pub fn row(&self, n: usize) -> &[f64] {
        &self.values[n * self.n_nodes..(n + 1) * self.n_nodes]
    }

    pub fn row_mut(&mut self, n: usize) -> &mut [f64] {
        &mut self.values[n * self.n_nodes..(n + 1) * self.n_nodes]
    }

    pub fn at(&self, n: usize, j: usize) -> f64 {
        self.values[n * self.n_nodes + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// The values of node `j` over the whole window.
    pub fn trace(&self, j: usize) -> TimeTrace {
        TimeTrace::new(self.dt, (0..=self.n_time).map(|n| self.at(n, j)).collect())
    }

    /// Index of the node at coordinate `x`, if `x` lies on the grid.
    pub fn node_index(&self, x: f64) -> Option<usize> {
        let r = (x - self.x_left) / self.dx;
        let j = libm::round(r);
        if j >= 0.0 && (j as usize) < self.n_nodes && (r - j).abs() <= 1e-8 {
            Some(j as usize)
        } else {
            None
        }
    }

    /// The sub-field on nodes `first..=last`.
    pub fn restrict(&self, first: usize, last: usize) -> Result<Self> {
        if first > last || last >= self.n_nodes {
            return Err(usage(format!(
                "node range {first}..={last} outside 0..{}",
                self.n_nodes
            )));
        }
        let width = last - first + 1;
        let mut values = Vec::with_capacity(width * (self.n_time + 1));
        for n in 0..=self.n_time {
            values.extend_from_slice(&self.row(n)[first..=last]);
        }
        Ok(SpaceTimeField {
            x_left: self.node_x(first),
            dx: self.dx,
            dt: self.dt,
            n_nodes: width,
            n_time: self.n_time,
            values,
        })
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.n_nodes == other.n_nodes
            && self.n_time == other.n_time
            && close(self.dx, other.dx)
            && close(self.dt, other.dt)
            && (self.x_left - other.x_left).abs() <= 1e-9 * self.dx
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// A function of time sampled at every level `0..=n_time`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeTrace {
    dt: f64,
    values: Vec<f64>,
}

impl TimeTrace {
    pub fn new(dt: f64, values: Vec<f64>) -> Self {
        TimeTrace { dt, values }
    }

    pub fn zeros(dt: f64, n_time: usize) -> Self {
        TimeTrace {
            dt,
            values: alloc::vec![0.0; n_time + 1],
        }
    }

    pub fn sample(dt: f64, n_time: usize, f: impl Fn(f64) -> f64) -> Self {
        TimeTrace {
            dt,
            values: (0..=n_time).map(|n| f(n as f64 * dt)).collect(),
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of time steps covered (one less than the number of samples).
    pub fn n_time(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn get(&self, n: usize) -> f64 {
        self.values[n]
    }

    /// Discrete L2 norm in time, `sqrt(dt * sum v_n^2)`.
    pub fn l2(&self) -> f64 {
        libm::sqrt(self.dt * self.values.iter().map(|v| v * v).sum::<f64>())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self - other`, sample by sample.
    pub fn sub(&self, other: &TimeTrace) -> Result<TimeTrace> {
        self.check_len(other)?;
        Ok(TimeTrace::new(
            self.dt,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        ))
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &TimeTrace, beta: f64) -> Result<TimeTrace> {
        self.check_len(other)?;
        Ok(TimeTrace::new(
            self.dt,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        ))
    }

    pub fn scaled(&self, alpha: f64) -> TimeTrace {
        TimeTrace::new(self.dt, self.values.iter().map(|v| alpha * v).collect())
    }

    fn check_len(&self, other: &TimeTrace) -> Result<()> {
        if self.values.len() != other.values.len() {
            return Err(usage(format!(
                "trace lengths differ: {} vs {}",
                self.values.len(),
                other.values.len()
            )));
        }
        Ok(())
    }
}

/// Discrete L2 norm of one field row with uniform weight `dx` on every node.
pub fn l2_space(row: &[f64], dx: f64) -> Result<f64> {
    if row.is_empty() {
        return Err(usage("l2_space of an empty row"));
    }
    Ok(libm::sqrt(dx * row.iter().map(|v| v * v).sum::<f64>()))
}

/// `max_n || u_ref[n] - u_approx[n] ||_{L2}`: the L-infinity-in-time, L2-in-space error.
pub fn error_linf_l2(u_ref: &SpaceTimeField, u_approx: &SpaceTimeField) -> Result<f64> {
    if !u_ref.same_grid(u_approx) {
        return Err(usage(format!(
            "field shapes differ: {}x{} on [{}, {}] vs {}x{} on [{}, {}]",
            u_ref.n_time + 1,
            u_ref.n_nodes,
            u_ref.x_left(),
            u_ref.x_right(),
            u_approx.n_time + 1,
            u_approx.n_nodes,
            u_approx.x_left(),
            u_approx.x_right()
        )));
    }
    let mut worst = 0.0f64;
    let mut diff = alloc::vec![0.0; u_ref.n_nodes];
    for n in 0..=u_ref.n_time {
        for ((d, a), b) in diff.iter_mut().zip(u_ref.row(n)).zip(u_approx.row(n)) {
            *d = a - b;
        }
        let e = l2_space(&diff, u_ref.dx)?;
        // NaN must propagate rather than be swallowed by max
        if e.is_nan() {
            return Ok(f64::NAN);
        }
        worst = worst.max(e);
    }
    Ok(worst)
}

/// Result of joining two subdomain fields at a shared node.
#[derive(Debug, Clone, PartialEq)]
pub struct Concatenated {
    pub field: SpaceTimeField,
    /// `max_n |u1(interface) - u2(interface)|`.
    pub discrepancy: f64,
}

/// Joins `left` and `right` where the last node of `left` is the first node of `right`.
/// The shared node takes its value from `left`.
pub fn concatenate(left: &SpaceTimeField, right: &SpaceTimeField) -> Result<Concatenated> {
    if left.n_time != right.n_time || !close(left.dx, right.dx) || !close(left.dt, right.dt) {
        return Err(usage("cannot concatenate fields on different grids"));
    }
    if (left.x_right() - right.x_left).abs() > 1e-8 * left.dx {
        return Err(usage(format!(
            "fields do not meet: left ends at {}, right starts at {}",
            left.x_right(),
            right.x_left
        )));
    }
    let n_nodes = left.n_nodes + right.n_nodes - 1;
    let mut values = Vec::with_capacity(n_nodes * (left.n_time + 1));
    let mut discrepancy = 0.0f64;
    for n in 0..=left.n_time {
        let l = left.row(n);
        let r = right.row(n);
        discrepancy = discrepancy.max((l[l.len() - 1] - r[0]).abs());
        values.extend_from_slice(l);
        values.extend_from_slice(&r[1..]);
    }
    Ok(Concatenated {
        field: SpaceTimeField {
            x_left: left.x_left,
            dx: left.dx,
            dt: left.dt,
            n_nodes,
            n_time: left.n_time,
            values,
        },
        discrepancy,
    })
}
