//! Exact Hodge decomposition for the declared orthonormal bases.

use num_traits::Zero;

use crate::exact_algebra::{DenseMatrix, Scalar};

use super::FDGLA;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeDegree {
    /// `L*_a = L_aᵀ: g_{a+1} → g_a`
    pub adjoint: DenseMatrix,
    /// `□ = L L* + L* L` on `g_a`
    pub laplacian: DenseMatrix,
    /// orthogonal projection onto ker □
    pub harmonic: DenseMatrix,
    /// Green operator: 0 on ker □, □⁻¹ on its orthogonal complement
    pub green: DenseMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeData {
    pub degrees: Vec<HodgeDegree>,
}

/// Per-degree adjoint, Laplacian, harmonic projection and Green operator.
pub fn hodge(g: &FDGLA) -> HodgeData {
    let top = g.top_degree();
    let mut degrees = Vec::new();
    for a in 0..=top {
        let n = g.dim(a);
        let la = g.differential(a);
        let adjoint = la.transpose();
        let mut lap = adjoint.mul(la);
        if a > 0 {
            let prev = g.differential(a - 1);
            lap = lap.add(&prev.mul(&prev.transpose()));
        }
        let kernel = lap.kernel_basis();
        let harmonic = if kernel.is_empty() {
            DenseMatrix::zeros(n, n)
        } else {
            let k = DenseMatrix::from_columns(n, &kernel);
            let gram = k.transpose().mul(&k).inverse().expect("kernel basis is independent");
            k.mul(&gram).mul(&k.transpose())
        };
        let proj = DenseMatrix::identity(n).sub(&harmonic);
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let rhs = proj.column(j);
            let x = if rhs.iter().all(|v| v.is_zero()) {
                vec![Scalar::zero(); n]
            } else {
                lap.solve(&rhs).expect("(I−H)y lies in the image of □")
            };
            cols.push(proj.mul_vec(&x));
        }
        let green = DenseMatrix::from_columns(n, &cols);
        degrees.push(HodgeDegree { adjoint, laplacian: lap, harmonic, green });
    }
    HodgeData { degrees }
}

impl HodgeData {
    /// Every Hodge identity, as (name, holds).
    pub fn checks(&self, g: &FDGLA) -> Vec<(String, bool)> {
        let mut out = Vec::new();
        let top = g.top_degree();
        for (a, h) in self.degrees.iter().enumerate() {
            let n = g.dim(a);
            let id = DenseMatrix::identity(n);
            let (lap, hh, gr) = (&h.laplacian, &h.harmonic, &h.green);
            out.push((format!("deg {a}: I = H + □G"), hh.add(&lap.mul(gr)) == id));
            out.push((format!("deg {a}: I = H + G□"), hh.add(&gr.mul(lap)) == id));
            out.push((format!("deg {a}: HG = 0"), hh.mul(gr).is_zero()));
            out.push((format!("deg {a}: GH = 0"), gr.mul(hh).is_zero()));
            out.push((format!("deg {a}: H□ = 0"), hh.mul(lap).is_zero()));
            out.push((format!("deg {a}: □H = 0"), lap.mul(hh).is_zero()));
            if a < top {
                let l = g.differential(a);
                let next = &self.degrees[a + 1];
                out.push((format!("deg {a}: LG = GL"), l.mul(gr) == next.green.mul(l)));
                out.push((format!("deg {a}: L*G = GL*"), h.adjoint.mul(&next.green) == gr.mul(&h.adjoint)));
            }
            // ker □ = ker L ∩ ker L*
            let mut rows = Vec::new();
            let l = g.differential(a);
            for i in 0..l.rows() {
                rows.push(l.row(i));
            }
            if a > 0 {
                let lt = g.differential(a - 1).transpose();
                for i in 0..lt.rows() {
                    rows.push(lt.row(i));
                }
            }
            let both = if rows.is_empty() { 0 } else { DenseMatrix::from_rows(&rows).map(|m| m.rank()).unwrap_or(0) };
            let ker_lap = n - lap.rank();
            out.push((format!("deg {a}: ker □ = ker L ∩ ker L*"), ker_lap == n - both));
            out.push((format!("deg {a}: dim ker □ = dim H"), ker_lap == g.cohomology_dim(a)));
        }
        out
    }

    pub fn all_hold(&self, g: &FDGLA) -> bool {
        self.checks(g).iter().all(|(_, ok)| *ok)
    }
}
