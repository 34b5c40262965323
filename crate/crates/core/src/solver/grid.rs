//! Spatial grids and their discrete Laplacians.

/// Cell-centred grid on `[0, R]` for radial fields: `r_i = (i + ½) dr`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RadialGrid {
    pub nr: usize,
    pub dr: f64,
}

impl RadialGrid {
    pub fn new(r_max: f64, dr: f64) -> Self {
        let nr = (r_max / dr).ceil().max(2.0) as usize;
        RadialGrid { nr, dr }
    }

    pub fn r_max(&self) -> f64 {
        self.nr as f64 * self.dr
    }

    pub fn r(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.dr
    }

    /// `V_i = (r_{i+½}³ − r_{i−½}³) / 3`, so that `4π V_i` is the shell volume.
    pub fn volume(&self, i: usize) -> f64 {
        let (a, b) = (i as f64, i as f64 + 1.0);
        (b * b * b - a * a * a) * self.dr.powi(3) / 3.0
    }

    /// Conservative finite-volume `Δu` with no flux through `r = 0` and
    /// through the outer face.
    pub fn laplacian(&self, u: &[f64], out: &mut [f64]) {
        let n = self.nr;
        let dr = self.dr;
        for i in 0..n {
            let right = if i + 1 < n {
                let f = (i as f64 + 1.0) * dr;
                f * f * (u[i + 1] - u[i])
            } else {
                0.0
            };
            let left = if i > 0 {
                let f = i as f64 * dr;
                f * f * (u[i] - u[i - 1])
            } else {
                0.0
            };
            out[i] = (right - left) / (dr * self.volume(i));
        }
    }

    /// Neighbour values with an even ghost at the origin and a copy ghost
    /// at the outer boundary.
    #[inline]
    pub fn neighbours(&self, u: &[f64], i: usize) -> (f64, f64) {
        let left = if i == 0 { u[0] } else { u[i - 1] };
        let right = if i + 1 == self.nr { u[i] } else { u[i + 1] };
        (left, right)
    }

    /// Centred `∂_r u` at cell `i`.
    pub fn dr_at(&self, u: &[f64], i: usize) -> f64 {
        let (l, r) = self.neighbours(u, i);
        (r - l) / (2.0 * self.dr)
    }

    /// Centred `∂_r² u` at cell `i`.
    pub fn drr_at(&self, u: &[f64], i: usize) -> f64 {
        let (l, r) = self.neighbours(u, i);
        (r - 2.0 * u[i] + l) / (self.dr * self.dr)
    }

    /// `∫ (u_t² + |∇u|² + m² u²) dx` for one component.
    pub fn energy(&self, u: &[f64], ut: &[f64], mass: f64) -> f64 {
        let m2 = mass * mass;
        let mut e = 0.0;
        for i in 0..self.nr {
            e += self.volume(i) * (ut[i] * ut[i] + m2 * u[i] * u[i]);
            if i + 1 < self.nr {
                let f = (i as f64 + 1.0) * self.dr;
                let du = u[i + 1] - u[i];
                e += f * f * du * du / self.dr;
            }
        }
        4.0 * std::f64::consts::PI * e
    }
}

/// Vertex grid on `[−L, L]³` with `n` points per axis and zero ghosts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CartesianGrid {
    pub n: usize,
    pub h: f64,
}

impl CartesianGrid {
    pub fn new(n: usize, half_width: f64) -> Self {
        CartesianGrid { n, h: 2.0 * half_width / (n as f64 - 1.0) }
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.h * (self.n as f64 - 1.0)
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> [usize; 3] {
        let n = self.n;
        [idx / (n * n), (idx / n) % n, idx % n]
    }

    pub fn x(&self, idx: usize) -> [f64; 3] {
        let c = self.coords(idx);
        let l = self.half_width();
        c.map(|i| -l + i as f64 * self.h)
    }

    pub fn radius(&self, idx: usize) -> f64 {
        let x = self.x(idx);
        (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
    }

    /// Value at integer offset `d` along `axis`, zero outside the grid.
    #[inline]
    pub fn shifted(&self, u: &[f64], idx: usize, axis: usize, d: isize) -> f64 {
        let mut c = self.coords(idx);
        let v = c[axis] as isize + d;
        if v < 0 || v >= self.n as isize {
            return 0.0;
        }
        c[axis] = v as usize;
        u[self.index(c[0], c[1], c[2])]
    }

    #[inline]
    fn shifted2(&self, u: &[f64], idx: usize, a: usize, da: isize, b: usize, db: isize) -> f64 {
        let mut c = self.coords(idx).map(|x| x as isize);
        c[a] += da;
        c[b] += db;
        if c.iter().any(|&x| x < 0 || x >= self.n as isize) {
            return 0.0;
        }
        u[self.index(c[0] as usize, c[1] as usize, c[2] as usize)]
    }

    /// Centred `∂_axis u`.
    pub fn d_at(&self, u: &[f64], idx: usize, axis: usize) -> f64 {
        (self.shifted(u, idx, axis, 1) - self.shifted(u, idx, axis, -1)) / (2.0 * self.h)
    }

    /// Centred `∂_a ∂_b u`.
    pub fn dd_at(&self, u: &[f64], idx: usize, a: usize, b: usize) -> f64 {
        let h2 = self.h * self.h;
        if a == b {
            (self.shifted(u, idx, a, 1) - 2.0 * u[idx] + self.shifted(u, idx, a, -1)) / h2
        } else {
            (self.shifted2(u, idx, a, 1, b, 1) - self.shifted2(u, idx, a, 1, b, -1) - self.shifted2(u, idx, a, -1, b, 1)
                + self.shifted2(u, idx, a, -1, b, -1))
                / (4.0 * h2)
        }
    }

    /// Seven-point Laplacian.
    pub fn laplacian(&self, u: &[f64], out: &mut [f64]) {
        let n2 = self.n * self.n;
        let h2 = self.h * self.h;
        crate::par::fill_chunks(out, n2, |i, slab| {
            for (off, o) in slab.iter_mut().enumerate() {
                let idx = i * n2 + off;
                let mut s = -6.0 * u[idx];
                for axis in 0..3 {
                    s += self.shifted(u, idx, axis, 1) + self.shifted(u, idx, axis, -1);
                }
                *o = s / h2;
            }
        });
    }

    /// `∫ (u_t² + |∇u|² + m² u²) dx` with forward differences, including
    /// the edges to the zero ghosts.
    pub fn energy(&self, u: &[f64], ut: &[f64], mass: f64) -> f64 {
        let m2 = mass * mass;
        let h3 = self.h.powi(3);
        let mut e = 0.0;
        for idx in 0..self.len() {
            e += ut[idx] * ut[idx] + m2 * u[idx] * u[idx];
            for axis in 0..3 {
                let du = (self.shifted(u, idx, axis, 1) - u[idx]) / self.h;
                e += du * du;
            }
            // Edges from the low ghost layer.
            for axis in 0..3 {
                if self.coords(idx)[axis] == 0 {
                    let du = u[idx] / self.h;
                    e += du * du;
                }
            }
        }
        e * h3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_laplacian_of_quadratic() {
        let g = RadialGrid::new(4.0, 0.01);
        let u: Vec<f64> = (0..g.nr).map(|i| g.r(i).powi(2)).collect();
        let mut out = vec![0.0; g.nr];
        g.laplacian(&u, &mut out);
        for &x in &out[..g.nr - 1] {
            assert!((x - 6.0).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn radial_volumes_sum_to_ball() {
        let g = RadialGrid::new(3.0, 0.1);
        let v: f64 = (0..g.nr).map(|i| g.volume(i)).sum();
        assert!((v - g.r_max().powi(3) / 3.0).abs() < 1e-10);
    }

    #[test]
    fn cartesian_second_differences() {
        let g = CartesianGrid::new(9, 1.0);
        let u: Vec<f64> = (0..g.len()).map(|i| { let x = g.x(i); x[0] * x[1] + x[2] * x[2] }).collect();
        let mid = g.index(4, 4, 4);
        assert!((g.dd_at(&u, mid, 0, 1) - 1.0).abs() < 1e-12);
        assert!((g.dd_at(&u, mid, 2, 2) - 2.0).abs() < 1e-12);
        assert!(g.d_at(&u, mid, 0).abs() < 1e-12);
    }
}
