//! Weighted sums over quadrature grids.
//!
//! Integrand values may be computed in parallel, but every reduction goes
//! through [`pairwise_sum`] over values laid out in node order, so results are
//! bit-identical for any thread count.

use rayon::prelude::*;

use super::grid::QuadratureGrid;
use crate::error::{Error, Result};

const PAIRWISE_BLOCK: usize = 32;
/// Rows handed to one worker at a time in the 2D integrators.
const ROW_BLOCK: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    pub value: f64,
    /// `|value − value at half resolution|`; zero when no coarser rule exists.
    pub error_estimate: f64,
    /// Number of integrand evaluations spent.
    pub evaluations: usize,
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

fn weighted_sum(values: &[f64], weights: &[f64]) -> f64 {
    let products: Vec<f64> = values.iter().zip(weights).map(|(v, w)| v * w).collect();
    pairwise_sum(&products)
}

fn check_finite_1d(nodes: &[f64], values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::NonFinite {
            node: vec![nodes[i]],
            value: values[i],
        }),
        None => Ok(()),
    }
}

fn sample<F>(f: &F, grid: &QuadratureGrid) -> Result<Vec<f64>>
where
    F: Fn(f64) -> f64 + Sync,
{
    let values: Vec<f64> = grid.nodes().par_iter().map(|&x| f(x)).collect();
    check_finite_1d(grid.nodes(), &values)?;
    Ok(values)
}

/// `∫ f` over `grid`, with a half-resolution error estimate.
pub fn integrate_1d<F>(f: F, grid: &QuadratureGrid) -> Result<IntegralResult>
where
    F: Fn(f64) -> f64 + Sync,
{
    let values = sample(&f, grid)?;
    let value = weighted_sum(&values, grid.weights());
    let mut evaluations = values.len();
    let coarse = if let Some(w) = grid.nested_coarse_weights() {
        Some(weighted_sum(&values, &w))
    } else if let Some(c) = grid.coarsened() {
        let cv = sample(&f, &c)?;
        evaluations += cv.len();
        Some(weighted_sum(&cv, c.weights()))
    } else {
        None
    };
    Ok(IntegralResult {
        value,
        error_estimate: coarse.map_or(0.0, |c| (value - c).abs()),
        evaluations,
    })
}

/// `∫∫ f(x, y)` on the tensor product of two grids.
pub fn integrate_2d<F>(f: F, grid_x: &QuadratureGrid, grid_y: &QuadratureGrid) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    integrate_2d_rows(
        |xs, ys, out| {
            for (r, &x) in xs.iter().enumerate() {
                for (c, &y) in ys.iter().enumerate() {
                    out[r * ys.len() + c] = f(x, y);
                }
            }
            Ok(())
        },
        grid_x,
        grid_y,
    )
}

/// Block form of [`integrate_2d`].
///
/// `fill(xs, ys, out)` must write `f(xs[r], ys[c])` into `out[r * ys.len() + c]`.
/// This lets integrands that factor over rows (matrix-product kernels,
/// separable wavefunctions) share work across a block.
pub fn integrate_2d_rows<F>(
    fill: F,
    grid_x: &QuadratureGrid,
    grid_y: &QuadratureGrid,
) -> Result<IntegralResult>
where
    F: Fn(&[f64], &[f64], &mut [f64]) -> Result<()> + Sync,
{
    let fine = tensor_sum(&fill, grid_x, grid_y, true)?;
    let mut evaluations = grid_x.len() * grid_y.len();
    let coarse = match fine.1 {
        Some(c) => Some(c),
        None => match (grid_x.coarsened(), grid_y.coarsened()) {
            (Some(cx), Some(cy)) => {
                evaluations += cx.len() * cy.len();
                Some(tensor_sum(&fill, &cx, &cy, false)?.0)
            }
            _ => None,
        },
    };
    Ok(IntegralResult {
        value: fine.0,
        error_estimate: coarse.map_or(0.0, |c| (fine.0 - c).abs()),
        evaluations,
    })
}

/// Returns the full-resolution sum and, when both grids are nested, the
/// half-resolution sum from the same samples.
fn tensor_sum<F>(
    fill: &F,
    grid_x: &QuadratureGrid,
    grid_y: &QuadratureGrid,
    want_nested: bool,
) -> Result<(f64, Option<f64>)>
where
    F: Fn(&[f64], &[f64], &mut [f64]) -> Result<()> + Sync,
{
    let xs = grid_x.nodes();
    let ys = grid_y.nodes();
    let wy = grid_y.weights();
    let nested = if want_nested {
        grid_x.nested_coarse_weights().zip(grid_y.nested_coarse_weights())
    } else {
        None
    };
    let ny = ys.len();

    let row_sums: Vec<Result<Vec<(f64, f64)>>> = xs
        .par_chunks(ROW_BLOCK)
        .map(|chunk| {
            let mut block = vec![0.0; chunk.len() * ny];
            fill(chunk, ys, &mut block)?;
            let mut sums = Vec::with_capacity(chunk.len());
            for (r, row) in block.chunks(ny).enumerate() {
                if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NonFinite {
                        node: vec![chunk[r], ys[c]],
                        value: row[c],
                    });
                }
                let full = weighted_sum(row, wy);
                let half = match &nested {
                    Some((_, wcy)) => weighted_sum(row, wcy),
                    None => 0.0,
                };
                sums.push((full, half));
            }
            Ok(sums)
        })
        .collect();

    let mut full_rows = Vec::with_capacity(xs.len());
    let mut half_rows = Vec::with_capacity(xs.len());
    for block in row_sums {
        for (f, h) in block? {
            full_rows.push(f);
            half_rows.push(h);
        }
    }
    let value = weighted_sum(&full_rows, grid_x.weights());
    let half = nested.map(|(wcx, _)| weighted_sum(&half_rows, &wcx));
    Ok((value, half))
}
