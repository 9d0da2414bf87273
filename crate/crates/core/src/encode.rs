//! Real-vector encoding of `x` cells for the GP and Parzen models.
//!
//! Numeric columns are min-max scaled to `[0, 1]`; symbolic columns expand
//! to a one-hot block over the column's observed levels. A symbol that was
//! never observed encodes as an all-zero block.

use crate::data::{Cell, ColumnSpec, Kind, Row};

/// Where one source column lands in the encoded vector.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    Numeric { dim: usize },
    OneHot { start: usize, levels: Vec<String> },
}

#[derive(Debug, Clone)]
pub struct Encoder {
    columns: Vec<ColumnSpec>,
    blocks: Vec<Block>,
    dim: usize,
}

impl Encoder {
    /// Builds the layout from the independent columns, in column order.
    pub fn new(x_columns: &[ColumnSpec]) -> Self {
        let mut blocks = Vec::with_capacity(x_columns.len());
        let mut dim = 0;
        for col in x_columns {
            match col.kind {
                Kind::Numeric => {
                    blocks.push(Block::Numeric { dim });
                    dim += 1;
                }
                Kind::Symbolic => {
                    blocks.push(Block::OneHot { start: dim, levels: col.levels.clone() });
                    dim += col.levels.len();
                }
            }
        }
        Encoder { columns: x_columns.to_vec(), blocks, dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn encode_cells(&self, cells: &[Cell]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for ((cell, block), col) in cells.iter().zip(&self.blocks).zip(&self.columns) {
            match (block, cell) {
                (Block::Numeric { dim }, Cell::Num(v)) => {
                    let span = col.hi - col.lo;
                    out[*dim] = if span > 0.0 { ((v - col.lo) / span).clamp(0.0, 1.0) } else { 0.0 };
                }
                (Block::OneHot { start, levels }, Cell::Sym(s)) => {
                    if let Ok(k) = levels.binary_search(s) {
                        out[start + k] = 1.0;
                    }
                }
                // kind mismatches cannot come out of a loaded table
                _ => {}
            }
        }
        out
    }

    pub fn encode(&self, row: &Row) -> Vec<f64> {
        self.encode_cells(&row.x)
    }
}
