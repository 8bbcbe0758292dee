use std::f64::consts::FRAC_PI_4;

use rustfft::num_complex::Complex;

use crate::error::Result;
use crate::fourier::FourierBox;
use crate::function::GridFunction;
use crate::operator::{check_order, FracStiffness};
use crate::quadrature::GaussLegendre;

/// Lags up to this length (per axis) are summed directly; longer ones come
/// from the FFT autocorrelation, where no cancellation occurs.
const DIRECT_LAGS_LINE: usize = 48;
const DIRECT_LAGS_PLANE: usize = 6;

/// Squared increments `D_m = Σ_i (u_{i+m} - u_i)²` for every lattice lag,
/// with `u` extended by zero.
struct LagTable {
    counts: [usize; 2],
    /// `Σ u²`.
    mass: f64,
    values: Vec<f64>,
}

impl LagTable {
    fn new(u: &GridFunction) -> Self {
        let grid = u.grid();
        let counts = grid.counts();
        let [nx, ny] = counts;
        let v = u.values();
        let mass: f64 = v.iter().map(|x| x * x).sum();
        let dims = [
            (2 * nx).next_power_of_two(),
            if ny > 1 { (2 * ny).next_power_of_two() } else { 1 },
        ];
        let fourier = FourierBox::new(dims);
        let mut data = fourier.embed(v, counts);
        fourier.forward(&mut data);
        for z in data.iter_mut() {
            *z = Complex::new(z.norm_sqr(), 0.0);
        }
        fourier.inverse(&mut data);
        let direct_lags = if grid.dim() == 1 { DIRECT_LAGS_LINE } else { DIRECT_LAGS_PLANE };
        let wx = 2 * nx - 1;
        let wy = 2 * ny - 1;
        let mut values = vec![0.0; wx * wy];
        for my in -(ny as i64 - 1)..ny as i64 {
            for mx in -(nx as i64 - 1)..nx as i64 {
                let direct = mx.unsigned_abs() as usize <= direct_lags && my.unsigned_abs() as usize <= direct_lags;
                let d = if direct {
                    direct_increment(v, counts, mx, my)
                } else {
                    let px = mx.rem_euclid(dims[0] as i64) as usize;
                    let py = my.rem_euclid(dims[1] as i64) as usize;
                    (2.0 * mass - 2.0 * data[px + py * dims[0]].re).max(0.0)
                };
                let (ix, iy) = ((mx + nx as i64 - 1) as usize, (my + ny as i64 - 1) as usize);
                values[ix + iy * wx] = d;
            }
        }
        Self { counts, mass, values }
    }

    fn get(&self, mx: i64, my: i64) -> f64 {
        let [nx, ny] = self.counts;
        if mx.unsigned_abs() as usize >= nx || my.unsigned_abs() as usize >= ny {
            return 2.0 * self.mass;
        }
        let wx = 2 * nx - 1;
        let (ix, iy) = ((mx + nx as i64 - 1) as usize, (my + ny as i64 - 1) as usize);
        self.values[ix + iy * wx]
    }
}

fn direct_increment(v: &[f64], counts: [usize; 2], mx: i64, my: i64) -> f64 {
    let [nx, ny] = counts;
    let at = |i: i64, j: i64| -> f64 {
        if i < 0 || j < 0 || i >= nx as i64 || j >= ny as i64 {
            0.0
        } else {
            v[i as usize + j as usize * nx]
        }
    };
    let mut total = 0.0;
    // every pair with at least one node inside the box
    for j in -my.abs()..ny as i64 + my.abs() {
        for i in -mx.abs()..nx as i64 + mx.abs() {
            let inside = i >= 0 && j >= 0 && i < nx as i64 && j < ny as i64;
            let partner_inside = {
                let (a, b) = (i + mx, j + my);
                a >= 0 && b >= 0 && a < nx as i64 && b < ny as i64
            };
            if inside || partner_inside {
                let d = at(i + mx, j + my) - at(i, j);
                total += d * d;
            }
        }
    }
    total
}

/// Centered cubic B-spline, the autocorrelation of the hat function.
fn cubic_bspline(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        2.0 / 3.0 - a * a + 0.5 * a * a * a
    } else if a < 2.0 {
        (2.0 - a).powi(3) / 6.0
    } else {
        0.0
    }
}

/// Polynomial coefficients of `t ↦ B(t - m)` on `[0, 1]`, `m = -1, 0, 1, 2`.
const BSPLINE_PIECES: [[f64; 4]; 4] = [
    [1.0 / 6.0, -0.5, 0.5, -1.0 / 6.0],
    [2.0 / 3.0, 0.0, -1.0, 0.5],
    [1.0 / 6.0, 0.5, 0.5, -0.5],
    [0.0, 0.0, 0.0, 1.0 / 6.0],
];

/// `∫_{R^N}∫_{R^N} |u(x) - u(y)|² / |x - y|^{N+2s}` for the piecewise
/// (bi)linear interpolant of the nodal values, extended by zero.
///
/// The double integral equals `∫ |z|^{-N-2s} ‖u(·+z) - u‖² dz`, and for a
/// piecewise linear `u` the L² modulus is a cubic spline in `z` whose
/// coefficients are the squared lattice increments. Returns the square root.
pub fn gagliardo_seminorm(u: &GridFunction, s: f64) -> Result<f64> {
    check_order(s)?;
    if u.values().iter().all(|&v| v == 0.0) {
        return Ok(0.0);
    }
    let table = LagTable::new(u);
    let h = u.grid().spacing();
    let n = u.grid().dim() as f64;
    let integral = match u.grid().dim() {
        1 => line_integral(&table, s),
        _ => plane_integral(&table, s),
    };
    Ok((2.0 * h.powf(n - 2.0 * s) * integral).max(0.0).sqrt())
}

/// `∫_R |t|^{-1-2s} (g(0) - g(t)) dt` in lattice units.
fn line_integral(table: &LagTable, s: f64) -> f64 {
    let d = |m: i64| table.get(m, 0);
    let gap = |t: f64| -> f64 {
        let k = t.floor() as i64;
        let spline: f64 = (k - 1..=k + 2).map(|m| d(m) * cubic_bspline(t - m as f64)).sum();
        0.5 * (spline - d(1) / 3.0)
    };
    // [0, 1]: g(0) - g(t) = c2 t² + c3 t³
    let c2 = 0.5 * d(1);
    let c3 = -d(1) / 3.0 + d(2) / 12.0;
    let mut half = c2 / (2.0 - 2.0 * s) + c3 / (3.0 - 2.0 * s);
    let reach = table.counts[0] as i64 + 2;
    let fine = GaussLegendre::new(12);
    let coarse = GaussLegendre::new(4);
    for k in 1..reach {
        let rule = if k <= 16 { &fine } else { &coarse };
        let (a, b) = (k as f64, k as f64 + 1.0);
        half += rule.integrate(|t| gap(t) * t.powf(-1.0 - 2.0 * s), a, b);
    }
    let g0 = table.mass - d(1) / 6.0;
    half += g0 * (reach as f64).powf(-2.0 * s) / (2.0 * s);
    2.0 * half
}

/// `∫_{R^2} |t|^{-2-2s} (g(0) - g(t)) dt` in lattice units.
fn plane_integral(table: &LagTable, s: f64) -> f64 {
    let d = |mx: i64, my: i64| table.get(mx, my);
    let at_origin = {
        let mut total = 0.0;
        for my in -1..=1 {
            for mx in -1..=1 {
                total += d(mx, my) * cubic_bspline(mx as f64) * cubic_bspline(my as f64);
            }
        }
        total
    };
    let gap = |tx: f64, ty: f64| -> f64 {
        let (kx, ky) = (tx.floor() as i64, ty.floor() as i64);
        let mut spline = 0.0;
        for my in ky - 1..=ky + 2 {
            let by = cubic_bspline(ty - my as f64);
            for mx in kx - 1..=kx + 2 {
                spline += d(mx, my) * cubic_bspline(tx - mx as f64) * by;
            }
        }
        0.5 * (spline - at_origin)
    };
    let moments = PolarMoments::new(s);
    // the integrand is even, so integrate over t_y > 0 and double
    let mut half = moments.unit_cell(d) + moments.unit_cell(|mx, my| d(-mx, my));
    let reach = table.counts[0].max(table.counts[1]) as i64 + 2;
    let fine = GaussLegendre::new(8);
    let mid = GaussLegendre::new(4);
    let coarse = GaussLegendre::new(2);
    let p = -1.0 - s;
    for ky in 0..reach {
        for kx in -reach..reach {
            if ky == 0 && (kx == 0 || kx == -1) {
                continue;
            }
            let dist = (kx.abs().min((kx + 1).abs())).max(ky);
            let rule = match dist {
                0..=3 => &fine,
                4..=16 => &mid,
                _ => &coarse,
            };
            let (x0, y0) = (kx as f64, ky as f64);
            for (y, wy) in rule.mapped(y0, y0 + 1.0) {
                for (x, wx) in rule.mapped(x0, x0 + 1.0) {
                    half += wx * wy * gap(x, y) * (x * x + y * y).powf(p);
                }
            }
        }
    }
    let g0 = 0.5 * (2.0 * table.mass - at_origin);
    half += g0 * 0.5 * (2.0 * reach as f64).powf(-2.0 * s) * square_exterior(s);
    2.0 * half
}

/// `∫_{R^2 \ [-½,½]^2} |y|^{-2-2s} dy`.
fn square_exterior(s: f64) -> f64 {
    let gl = GaussLegendre::new(24);
    (4.0 / s) * gl.integrate(|phi| (2.0 * phi.cos()).powf(2.0 * s), 0.0, FRAC_PI_4)
}

/// `∫_{[0,1]^2} |t|^{-2-2s} t_x^i t_y^j dt` for `i, j ≤ 3`, `i + j ≥ 2`. The
/// constant and linear parts of `g(0) - g(t)` vanish since `g` is even and C².
struct PolarMoments {
    table: [[f64; 4]; 4],
}

impl PolarMoments {
    fn new(s: f64) -> Self {
        let gl = GaussLegendre::new(24);
        let mut table = [[0.0; 4]; 4];
        for (i, row) in table.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if i + j < 2 {
                    continue;
                }
                let p = (i + j) as f64 - 2.0 * s;
                let f = |phi: f64| {
                    let (c, sn) = (phi.cos(), phi.sin());
                    let reach = 1.0 / c.max(sn);
                    c.powi(i as i32) * sn.powi(j as i32) * reach.powf(p) / p
                };
                *cell = gl.integrate(f, 0.0, FRAC_PI_4) + gl.integrate(f, FRAC_PI_4, 2.0 * FRAC_PI_4);
            }
        }
        Self { table }
    }

    /// Exact integral over `[0,1]^2` of `|t|^{-2-2s}(g(0) - g(t))` given the
    /// increments `D_m` seen from that cell.
    fn unit_cell(&self, d: impl Fn(i64, i64) -> f64) -> f64 {
        let mut coeffs = [[0.0; 4]; 4];
        for (ay, by) in BSPLINE_PIECES.iter().enumerate() {
            for (ax, bx) in BSPLINE_PIECES.iter().enumerate() {
                let dm = d(ax as i64 - 1, ay as i64 - 1);
                if dm == 0.0 {
                    continue;
                }
                for i in 0..4 {
                    for j in 0..4 {
                        coeffs[i][j] += 0.5 * dm * bx[i] * by[j];
                    }
                }
            }
        }
        let mut total = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i + j >= 2 {
                    total += coeffs[i][j] * self.table[i][j];
                }
            }
        }
        total
    }
}

/// `sqrt(spacing^N · uᵀAu)`.
pub fn energy_norm(op: &FracStiffness, u: &GridFunction) -> Result<f64> {
    Ok(op.form(u, u)?.max(0.0).sqrt())
}

/// `sqrt(spacing^N · Σ u²)`.
pub fn l2_norm(u: &GridFunction) -> f64 {
    u.l2_norm()
}
