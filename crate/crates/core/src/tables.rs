//! Reference tables of structure constants and curvature data in the frame
//! `{e1, e2, e3}`.
//!
//! These are frozen reference values, not the evaluation path: the operations
//! in [`crate::algebra`] compute everything in closed form and
//! [`crate::verify`] checks each entry here against them.

use crate::algebra::AlgebraVector;

/// `table[i][j]` holds the frame coefficients of a bilinear map evaluated on `(e_i, e_j)`.
pub type BilinearTable = [[[f64; 3]; 3]; 3];

/// `table[i][j][k]` holds the frame coefficients of `R(e_i, e_j) e_k`.
pub type TrilinearTable = [[[[f64; 3]; 3]; 3]; 3];

#[derive(Debug, Clone, PartialEq)]
pub struct StructureTables {
    pub bracket: BilinearTable,
    pub connection: BilinearTable,
    pub u_tensor: BilinearTable,
    pub curvature: TrilinearTable,
    /// Row `i` is `φ(e_i)`.
    pub lorentz_force: [[f64; 3]; 3],
    pub ricci_principal: [f64; 3],
    pub holomorphic_sectional: f64,
}

impl Default for StructureTables {
    fn default() -> Self {
        Self::standard()
    }
}

impl StructureTables {
    pub fn standard() -> Self {
        const Z: [f64; 3] = [0.0, 0.0, 0.0];
        let bracket = [
            [Z, [0.0, 0.0, 2.0], [0.0, -2.0, 0.0]],
            [[0.0, 0.0, -2.0], Z, [-2.0, 0.0, 0.0]],
            [[0.0, 2.0, 0.0], [2.0, 0.0, 0.0], Z],
        ];
        let connection = [
            [Z, [0.0, 0.0, 3.0], [0.0, -3.0, 0.0]],
            [[0.0, 0.0, 1.0], Z, [-1.0, 0.0, 0.0]],
            [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], Z],
        ];
        let u_tensor = [
            [Z, [0.0, 0.0, 2.0], [0.0, -2.0, 0.0]],
            [[0.0, 0.0, 2.0], Z, Z],
            [[0.0, -2.0, 0.0], Z, Z],
        ];

        // Independent entries; the rest follow from R(X,Y) = -R(Y,X), and
        // R(e_i, e_j) e_k = 0 whenever k is outside {i, j}.
        let mut curvature = [[[Z; 3]; 3]; 3];
        let listed: [((usize, usize, usize), [f64; 3]); 6] = [
            ((0, 1, 0), [0.0, -1.0, 0.0]),
            ((0, 1, 1), [1.0, 0.0, 0.0]),
            ((1, 2, 1), [0.0, 0.0, 7.0]),
            ((1, 2, 2), [0.0, -7.0, 0.0]),
            ((0, 2, 0), [0.0, 0.0, -1.0]),
            ((0, 2, 2), [1.0, 0.0, 0.0]),
        ];
        for ((i, j, k), v) in listed {
            curvature[i][j][k] = v;
            curvature[j][i][k] = [-v[0], -v[1], -v[2]];
        }

        Self {
            bracket,
            connection,
            u_tensor,
            curvature,
            lorentz_force: [Z, [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]],
            ricci_principal: [2.0, -6.0, -6.0],
            holomorphic_sectional: -7.0,
        }
    }

    /// Bilinear extension of a frame table.
    pub fn eval_bilinear(table: &BilinearTable, x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
        let (xs, ys) = (x.to_array(), y.to_array());
        let mut out = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                let w = xs[i] * ys[j];
                for (o, t) in out.iter_mut().zip(table[i][j]) {
                    *o += w * t;
                }
            }
        }
        AlgebraVector::from_array(out)
    }

    pub fn connection_tabulated(&self, x: AlgebraVector, y: AlgebraVector) -> AlgebraVector {
        Self::eval_bilinear(&self.connection, x, y)
    }

    #[allow(clippy::needless_range_loop)]
    pub fn curvature_tabulated(
        &self,
        x: AlgebraVector,
        y: AlgebraVector,
        z: AlgebraVector,
    ) -> AlgebraVector {
        let (xs, ys, zs) = (x.to_array(), y.to_array(), z.to_array());
        let mut out = [0.0; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    let w = xs[i] * ys[j] * zs[k];
                    for (o, t) in out.iter_mut().zip(self.curvature[i][j][k]) {
                        *o += w * t;
                    }
                }
            }
        }
        AlgebraVector::from_array(out)
    }

    /// Visits every scalar entry of every table mutably, tagged with a label.
    pub fn for_each_entry_mut(&mut self, mut f: impl FnMut(String, &mut f64)) {
        for (name, table) in [
            ("bracket", &mut self.bracket),
            ("connection", &mut self.connection),
            ("u_tensor", &mut self.u_tensor),
        ] {
            for (i, row) in table.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    for (k, x) in v.iter_mut().enumerate() {
                        f(format!("{name}[{i}][{j}][{k}]"), x);
                    }
                }
            }
        }
        for (i, a) in self.curvature.iter_mut().enumerate() {
            for (j, b) in a.iter_mut().enumerate() {
                for (k, v) in b.iter_mut().enumerate() {
                    for (l, x) in v.iter_mut().enumerate() {
                        f(format!("curvature[{i}][{j}][{k}][{l}]"), x);
                    }
                }
            }
        }
        for (i, v) in self.lorentz_force.iter_mut().enumerate() {
            for (k, x) in v.iter_mut().enumerate() {
                f(format!("lorentz_force[{i}][{k}]"), x);
            }
        }
        for (i, x) in self.ricci_principal.iter_mut().enumerate() {
            f(format!("ricci_principal[{i}]"), x);
        }
        f("holomorphic_sectional".to_string(), &mut self.holomorphic_sectional);
    }

    pub fn entry_count(&self) -> usize {
        let mut n = 0;
        self.clone().for_each_entry_mut(|_, _| n += 1);
        n
    }
}
