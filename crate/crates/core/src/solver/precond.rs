use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembly::dense::gemv;
use crate::error::{Error, Result};

/// Block access to an operator partitioned into equally sized element blocks.
pub trait BlockSource: Sync {
    fn n_blocks(&self) -> usize;
    fn block_size(&self) -> usize;
    /// Block `i` followed by its distinct neighbours.
    fn stencil(&self, i: usize) -> Vec<usize>;
    /// Block of rows `row` and columns `col`; `None` when they do not couple.
    fn block(&self, row: usize, col: usize) -> Option<DMatrix<f64>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PreconditionerKind {
    #[default]
    None,
    Pre1,
    Pre2,
}

/// Inverted diagonal blocks.
#[derive(Debug, Clone)]
pub struct BlockDiagonal {
    nb: usize,
    inv: Vec<DMatrix<f64>>,
}

/// First block row of the inverse of each element's local stencil system.
#[derive(Debug, Clone)]
pub struct StencilInverse {
    nb: usize,
    stencils: Vec<Vec<usize>>,
    rows: Vec<DMatrix<f64>>,
}

impl StencilInverse {
    /// Number of stored block entries of element `i`.
    pub fn stored_blocks(&self, i: usize) -> usize {
        self.stencils[i].len()
    }
}

#[derive(Debug, Clone, Default)]
pub enum Preconditioner {
    #[default]
    None,
    Pre1(BlockDiagonal),
    Pre2(StencilInverse),
}

impl Preconditioner {
    pub fn build(kind: PreconditionerKind, src: &dyn BlockSource) -> Result<Self> {
        Ok(match kind {
            PreconditionerKind::None => Preconditioner::None,
            PreconditionerKind::Pre1 => Preconditioner::Pre1(build_pre1(src)?),
            PreconditionerKind::Pre2 => Preconditioner::Pre2(build_pre2(src)?),
        })
    }

    pub fn kind(&self) -> PreconditionerKind {
        match self {
            Preconditioner::None => PreconditionerKind::None,
            Preconditioner::Pre1(_) => PreconditionerKind::Pre1,
            Preconditioner::Pre2(_) => PreconditionerKind::Pre2,
        }
    }

    /// `z ← P r`.
    pub fn apply(&self, r: &[f64], z: &mut [f64]) {
        match self {
            Preconditioner::None => z.copy_from_slice(r),
            Preconditioner::Pre1(p) => {
                let nb = p.nb;
                z.par_chunks_mut(nb).enumerate().for_each(|(i, zi)| {
                    zi.fill(0.0);
                    gemv(&p.inv[i], &r[i * nb..(i + 1) * nb], zi, 1.0);
                });
            }
            Preconditioner::Pre2(p) => {
                let nb = p.nb;
                z.par_chunks_mut(nb).enumerate().for_each(|(i, zi)| {
                    zi.fill(0.0);
                    let rows = &p.rows[i];
                    let s = rows.as_slice();
                    for (e, &g) in p.stencils[i].iter().enumerate() {
                        let rg = &r[g * nb..(g + 1) * nb];
                        for (c, &x) in rg.iter().enumerate() {
                            if x == 0.0 {
                                continue;
                            }
                            let col = &s[(e * nb + c) * nb..(e * nb + c + 1) * nb];
                            for (zr, &a) in zi.iter_mut().zip(col) {
                                *zr += a * x;
                            }
                        }
                    }
                });
            }
        }
    }
}

pub fn build_pre1(src: &dyn BlockSource) -> Result<BlockDiagonal> {
    let inv = (0..src.n_blocks())
        .into_par_iter()
        .map(|i| {
            let d = src.block(i, i).expect("diagonal block exists");
            d.try_inverse().ok_or(Error::Singular {
                what: "diagonal block",
                index: i,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockDiagonal {
        nb: src.block_size(),
        inv,
    })
}

pub fn build_pre2(src: &dyn BlockSource) -> Result<StencilInverse> {
    let nb = src.block_size();
    let built = (0..src.n_blocks())
        .into_par_iter()
        .map(|i| {
            let st = src.stencil(i);
            let s = st.len();
            let mut local = DMatrix::zeros(s * nb, s * nb);
            for (a, &ea) in st.iter().enumerate() {
                for (b, &eb) in st.iter().enumerate() {
                    if let Some(blk) = src.block(ea, eb) {
                        local.view_mut((a * nb, b * nb), (nb, nb)).copy_from(&blk);
                    }
                }
            }
            let inv = local.try_inverse().ok_or(Error::Singular {
                what: "local stencil system",
                index: i,
            })?;
            Ok((st, inv.rows(0, nb).into_owned()))
        })
        .collect::<Result<Vec<_>>>()?;
    let (stencils, rows) = built.into_iter().unzip();
    Ok(StencilInverse { nb, stencils, rows })
}
