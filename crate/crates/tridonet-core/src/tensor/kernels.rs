//! Dense compute kernels behind the tape ops.
//!
//! Convolutions are direct (no im2col): the inner loops run along the
//! contiguous width axis so they autovectorize. Parallel splits are always
//! over disjoint output slices, keeping results bit-identical for any
//! worker count.

use rayon::prelude::*;

use crate::util::pool;

#[inline]
fn axpy(out: &mut [f64], w: f64, x: &[f64]) {
    debug_assert_eq!(out.len(), x.len());
    for (o, &v) in out.iter_mut().zip(x) {
        *o += w * v;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Output spatial size for zero-padded convolution.
pub fn conv_out_dim(h: usize, k: usize, pad: usize, stride: usize) -> usize {
    (h + 2 * pad - k) / stride + 1
}

/// Direct 2-D cross-correlation, zero padding, arbitrary stride.
/// input [ci,h,w], weight [co,ci,k,k], bias [co] -> [co,oh,ow].
pub fn conv2d_fwd(
    input: &[f64],
    ci: usize,
    h: usize,
    w: usize,
    weight: &[f64],
    co: usize,
    k: usize,
    bias: Option<&[f64]>,
    pad: usize,
    stride: usize,
) -> Vec<f64> {
    let oh = conv_out_dim(h, k, pad, stride);
    let ow = conv_out_dim(w, k, pad, stride);
    let mut out = vec![0.0; co * oh * ow];
    pool().install(|| {
        out.par_chunks_mut(oh * ow).enumerate().for_each(|(oc, plane)| {
            if let Some(b) = bias {
                plane.fill(b[oc]);
            }
            for ic in 0..ci {
                let in_plane = &input[ic * h * w..(ic + 1) * h * w];
                for ky in 0..k {
                    for kx in 0..k {
                        let wv = weight[((oc * ci + ic) * k + ky) * k + kx];
                        if wv == 0.0 {
                            continue;
                        }
                        if stride == 1 {
                            // iy = oy + ky - pad, ix = ox + kx - pad
                            let oy0 = pad.saturating_sub(ky);
                            let oy1 = (h + pad - ky).min(oh);
                            let ox0 = pad.saturating_sub(kx);
                            let ox1 = (w + pad - kx).min(ow);
                            if ox0 >= ox1 {
                                continue;
                            }
                            for oy in oy0..oy1 {
                                let iy = oy + ky - pad;
                                axpy(
                                    &mut plane[oy * ow + ox0..oy * ow + ox1],
                                    wv,
                                    &in_plane[iy * w + ox0 + kx - pad..iy * w + ox1 + kx - pad],
                                );
                            }
                        } else {
                            for oy in 0..oh {
                                let iy = (oy * stride + ky) as isize - pad as isize;
                                if iy < 0 || iy >= h as isize {
                                    continue;
                                }
                                let row = &in_plane[iy as usize * w..(iy as usize + 1) * w];
                                for ox in 0..ow {
                                    let ix = (ox * stride + kx) as isize - pad as isize;
                                    if ix >= 0 && ix < w as isize {
                                        plane[oy * ow + ox] += wv * row[ix as usize];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        });
    });
    out
}

/// Backward of [`conv2d_fwd`] w.r.t. the input.
pub fn conv2d_bwd_input(
    gout: &[f64],
    ci: usize,
    h: usize,
    w: usize,
    weight: &[f64],
    co: usize,
    k: usize,
    pad: usize,
    stride: usize,
) -> Vec<f64> {
    let oh = conv_out_dim(h, k, pad, stride);
    let ow = conv_out_dim(w, k, pad, stride);
    let mut gin = vec![0.0; ci * h * w];
    pool().install(|| {
        gin.par_chunks_mut(h * w).enumerate().for_each(|(ic, gplane)| {
            for oc in 0..co {
                let gout_plane = &gout[oc * oh * ow..(oc + 1) * oh * ow];
                for ky in 0..k {
                    for kx in 0..k {
                        let wv = weight[((oc * ci + ic) * k + ky) * k + kx];
                        if wv == 0.0 {
                            continue;
                        }
                        if stride == 1 {
                            let oy0 = pad.saturating_sub(ky);
                            let oy1 = (h + pad - ky).min(oh);
                            let ox0 = pad.saturating_sub(kx);
                            let ox1 = (w + pad - kx).min(ow);
                            if ox0 >= ox1 {
                                continue;
                            }
                            for oy in oy0..oy1 {
                                let iy = oy + ky - pad;
                                axpy(
                                    &mut gplane[iy * w + ox0 + kx - pad..iy * w + ox1 + kx - pad],
                                    wv,
                                    &gout_plane[oy * ow + ox0..oy * ow + ox1],
                                );
                            }
                        } else {
                            for oy in 0..oh {
                                let iy = (oy * stride + ky) as isize - pad as isize;
                                if iy < 0 || iy >= h as isize {
                                    continue;
                                }
                                for ox in 0..ow {
                                    let ix = (ox * stride + kx) as isize - pad as isize;
                                    if ix >= 0 && ix < w as isize {
                                        gplane[iy as usize * w + ix as usize] +=
                                            wv * gout_plane[oy * ow + ox];
                                    }
                                }
                            }
                        }
                    }
                }
            }
        });
    });
    gin
}

/// Backward of [`conv2d_fwd`] w.r.t. the weights.
pub fn conv2d_bwd_weight(
    gout: &[f64],
    input: &[f64],
    ci: usize,
    h: usize,
    w: usize,
    co: usize,
    k: usize,
    pad: usize,
    stride: usize,
) -> Vec<f64> {
    let oh = conv_out_dim(h, k, pad, stride);
    let ow = conv_out_dim(w, k, pad, stride);
    let mut gw = vec![0.0; co * ci * k * k];
    pool().install(|| {
        gw.par_chunks_mut(ci * k * k).enumerate().for_each(|(oc, gw_oc)| {
            let gout_plane = &gout[oc * oh * ow..(oc + 1) * oh * ow];
            for ic in 0..ci {
                let in_plane = &input[ic * h * w..(ic + 1) * h * w];
                for ky in 0..k {
                    for kx in 0..k {
                        let mut acc = 0.0;
                        if stride == 1 {
                            let oy0 = pad.saturating_sub(ky);
                            let oy1 = (h + pad - ky).min(oh);
                            let ox0 = pad.saturating_sub(kx);
                            let ox1 = (w + pad - kx).min(ow);
                            if ox0 >= ox1 {
                                continue;
                            }
                            for oy in oy0..oy1 {
                                let iy = oy + ky - pad;
                                acc += dot(
                                    &gout_plane[oy * ow + ox0..oy * ow + ox1],
                                    &in_plane[iy * w + ox0 + kx - pad..iy * w + ox1 + kx - pad],
                                );
                            }
                        } else {
                            for oy in 0..oh {
                                let iy = (oy * stride + ky) as isize - pad as isize;
                                if iy < 0 || iy >= h as isize {
                                    continue;
                                }
                                for ox in 0..ow {
                                    let ix = (ox * stride + kx) as isize - pad as isize;
                                    if ix >= 0 && ix < w as isize {
                                        acc += gout_plane[oy * ow + ox]
                                            * in_plane[iy as usize * w + ix as usize];
                                    }
                                }
                            }
                        }
                        gw_oc[(ic * k + ky) * k + kx] = acc;
                    }
                }
            }
        });
    });
    gw
}

/// Backward of [`conv2d_fwd`] w.r.t. the bias: per-channel sums of gout.
pub fn conv2d_bwd_bias(gout: &[f64], co: usize, plane: usize) -> Vec<f64> {
    (0..co).map(|oc| gout[oc * plane..(oc + 1) * plane].iter().sum()).collect()
}

// ── Tight-frame circular convolutions ────────────────────────────────────
//
// Analysis maps [h,w] -> [kf,h,w] with periodic boundary and a fixed 1/p
// scale; synthesis is its exact adjoint. With orthonormal p×p filters the
// pair satisfies WᵀW = I on images (Parseval); the frame penalty in the
// loss maintains that during training.

/// dst += wv * src rotated left by `shift` (circular row access).
#[inline]
fn axpy_rot(dst: &mut [f64], wv: f64, src: &[f64], shift: usize) {
    let w = dst.len();
    let s = shift % w;
    axpy(&mut dst[..w - s], wv, &src[s..]);
    if s > 0 {
        axpy(&mut dst[w - s..], wv, &src[..s]);
    }
}

/// Dot of `a` with `b` rotated left by `shift`.
#[inline]
fn dot_rot(a: &[f64], b: &[f64], shift: usize) -> f64 {
    let w = a.len();
    let s = shift % w;
    let mut acc = dot(&a[..w - s], &b[s..]);
    if s > 0 {
        acc += dot(&a[w - s..], &b[..s]);
    }
    acc
}

/// Frame analysis: coeffs[f](y,x) = (1/p)·Σ filt[f](dy,dx)·img((y+dy−o)%h,(x+dx−o)%w), o = p/2.
pub fn frame_analysis_fwd(
    img: &[f64],
    h: usize,
    w: usize,
    filters: &[f64],
    kf: usize,
    p: usize,
) -> Vec<f64> {
    let scale = 1.0 / p as f64;
    let o = p / 2;
    let mut out = vec![0.0; kf * h * w];
    pool().install(|| {
        out.par_chunks_mut(h * w).enumerate().for_each(|(f, plane)| {
            for dy in 0..p {
                let ys = dy + h - o; // (y + dy - o) mod h == (y + ys) mod h
                for dx in 0..p {
                    let wv = scale * filters[(f * p + dy) * p + dx];
                    let xshift = (dx + w - o) % w;
                    for y in 0..h {
                        let iy = (y + ys) % h;
                        axpy_rot(&mut plane[y * w..(y + 1) * w], wv, &img[iy * w..(iy + 1) * w], xshift);
                    }
                }
            }
        });
    });
    out
}

/// Frame synthesis (exact adjoint of analysis):
/// img(y,x) = (1/p)·Σ_f Σ filt[f](dy,dx)·coeffs[f]((y−dy+o)%h,(x−dx+o)%w).
pub fn frame_synthesis_fwd(
    coeffs: &[f64],
    h: usize,
    w: usize,
    filters: &[f64],
    kf: usize,
    p: usize,
) -> Vec<f64> {
    let scale = 1.0 / p as f64;
    let o = p / 2;
    let mut out = vec![0.0; h * w];
    pool().install(|| {
        out.par_chunks_mut(w).enumerate().for_each(|(y, row)| {
            for f in 0..kf {
                let plane = &coeffs[f * h * w..(f + 1) * h * w];
                for dy in 0..p {
                    let iy = (y + h + o - dy) % h;
                    let src = &plane[iy * w..(iy + 1) * w];
                    for dx in 0..p {
                        let wv = scale * filters[(f * p + dy) * p + dx];
                        let xshift = (w + o - dx) % w;
                        axpy_rot(row, wv, src, xshift);
                    }
                }
            }
        });
    });
    out
}

/// Shared inner loop for both filter gradients: accumulates
/// gf(dy,dx) = scale·Σ_{y,x} a(y,x)·b((y+dy−o)%h,(x+dx−o)%w).
fn filter_grad_plane(a: &[f64], b: &[f64], h: usize, w: usize, p: usize, gfp: &mut [f64]) {
    let scale = 1.0 / p as f64;
    let o = p / 2;
    for dy in 0..p {
        let ys = dy + h - o;
        for dx in 0..p {
            let xshift = (dx + w - o) % w;
            let mut acc = 0.0;
            for y in 0..h {
                let iy = (y + ys) % h;
                acc += dot_rot(&a[y * w..(y + 1) * w], &b[iy * w..(iy + 1) * w], xshift);
            }
            gfp[dy * p + dx] = scale * acc;
        }
    }
}

/// Gradient of analysis w.r.t. filters: pairs gout[f] with the shifted image.
pub fn frame_bwd_filters_analysis(
    gout: &[f64],
    img: &[f64],
    h: usize,
    w: usize,
    kf: usize,
    p: usize,
) -> Vec<f64> {
    let mut gf = vec![0.0; kf * p * p];
    pool().install(|| {
        gf.par_chunks_mut(p * p).enumerate().for_each(|(f, gfp)| {
            filter_grad_plane(&gout[f * h * w..(f + 1) * h * w], img, h, w, p, gfp);
        });
    });
    gf
}

/// Gradient of synthesis w.r.t. filters.
///
/// out(y,x) = (1/p)·Σ filt·c((y−dy+o),(x−dx+o)) pairs gout(y',x') with
/// c[f] at the analysis-style shift once variables are swapped, so this is
/// [`filter_grad_plane`] with the coefficient plane in the first slot.
pub fn frame_bwd_filters_synthesis(
    gout: &[f64],
    coeffs: &[f64],
    h: usize,
    w: usize,
    kf: usize,
    p: usize,
) -> Vec<f64> {
    let mut gf = vec![0.0; kf * p * p];
    pool().install(|| {
        gf.par_chunks_mut(p * p).enumerate().for_each(|(f, gfp)| {
            filter_grad_plane(&coeffs[f * h * w..(f + 1) * h * w], gout, h, w, p, gfp);
        });
    });
    gf
}

/// ‖UᵀU − I‖²_F on the kf×p² filter matrix, plus its gradient 4·U·(UᵀU−I).
pub fn gram_penalty(filters: &[f64], kf: usize, p: usize) -> (f64, Vec<f64>) {
    let n = p * p;
    let mut gmat = vec![0.0; n * n]; // UᵀU − I
    for a in 0..n {
        for b in 0..n {
            let mut acc = 0.0;
            for f in 0..kf {
                acc += filters[f * n + a] * filters[f * n + b];
            }
            if a == b {
                acc -= 1.0;
            }
            gmat[a * n + b] = acc;
        }
    }
    let penalty: f64 = gmat.iter().map(|v| v * v).sum();
    let mut grad = vec![0.0; kf * n];
    for f in 0..kf {
        for b in 0..n {
            let mut acc = 0.0;
            for a in 0..n {
                acc += filters[f * n + a] * gmat[a * n + b];
            }
            grad[f * n + b] = 4.0 * acc;
        }
    }
    (penalty, grad)
}
