//! Built-in evaluation grids and their CSV file form.

use std::io::Read;

use num_complex::Complex64;
use oddbal_core::modular::{LawPoint, TransformLaw};
use serde::{Deserialize, Serialize};

use crate::io::IoError;

/// One transformation-law check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawCase {
    pub law: TransformLaw,
    pub point: LawPoint,
}

/// One decomposition sample point with its series order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionPoint {
    pub z: Complex64,
    pub tau: Complex64,
    pub order: usize,
}

const fn c(re: f64, im: f64) -> Complex64 {
    Complex64 { re, im }
}

const ORIGIN: Complex64 = c(0.0, 0.0);

/// `(z_re, z_im, tau_re, tau_im)` with `|z| <= 1`, `Im tau` in `[0.3, 2]`,
/// `|Re tau| <= 1`.
const THETA_POINTS: [[f64; 4]; 20] = [
    [0.151, 0.3793, -0.4823, 0.5547],
    [0.3055, 0.511, -0.3307, 0.6937],
    [0.2492, 0.5618, -0.7515, 0.3849],
    [-0.1986, -0.2808, 0.2035, 0.6089],
    [-0.6566, -0.2426, -0.5302, 0.8119],
    [-0.1189, -0.4058, 0.9475, 1.3571],
    [0.3222, -0.1758, 0.871, 1.7276],
    [-0.3548, 0.2952, 0.8902, 1.2714],
    [-0.1815, -0.1721, 0.6679, 1.2082],
    [0.6092, 0.2611, 0.6364, 1.4319],
    [-0.1734, -0.2394, 0.9181, 1.488],
    [-0.1313, -0.5665, -0.1698, 1.5189],
    [-0.2364, 0.5305, -0.767, 1.3256],
    [0.2576, -0.6128, 0.3211, 1.439],
    [0.2992, 0.317, 0.4045, 1.9577],
    [0.5772, -0.2318, 0.084, 1.9152],
    [-0.3524, -0.1969, 0.5438, 1.5346],
    [-0.1037, -0.6362, 0.5333, 1.8568],
    [0.5472, 0.3403, 0.7417, 1.6108],
    [-0.3322, 0.1741, -0.0923, 1.3573],
];

/// `(u_re, u_im, v_re, v_im, tau_re, tau_im)`, each `u` at least 0.15 away
/// from the lattice `Z + Z tau` in both lattice coordinates.
const APPELL_POINTS: [[f64; 6]; 10] = [
    [0.2136, -0.4134, 0.6458, -0.1856, -0.1222, 0.8135],
    [-0.7596, -0.2781, -0.0124, 0.4824, 0.3833, 0.6042],
    [-0.0984, 0.2574, 0.5271, 0.1737, 0.6207, 0.8128],
    [0.6269, -0.411, -0.353, -0.1963, -0.5564, 1.2006],
    [-0.2104, 0.1853, 0.4955, -0.0764, 0.3313, 0.9086],
    [-0.853, -0.4923, 0.6112, -0.1366, 0.143, 0.7476],
    [-0.2808, 0.2187, 0.0485, 0.4376, 0.0532, 1.0861],
    [0.5595, 0.3153, 0.5098, 0.3558, -0.1216, 1.0727],
    [-0.632, -0.3946, 0.5746, -0.1731, -0.0062, 1.1813],
    [0.2059, 0.3901, -0.0314, 0.4377, -0.1993, 0.4771],
];

/// `(z_re, z_im, tau_re, tau_im)` with `Im tau` in `[0.4, 1.5]`.
const MORDELL_POINTS: [[f64; 4]; 10] = [
    [0.3327, -0.1537, 0.5308, 1.204],
    [0.6056, 0.2489, -0.4206, 0.5834],
    [0.055, -0.0099, 0.1637, 1.2662],
    [-0.2258, 0.2054, 0.2755, 1.0715],
    [-0.7838, 0.0878, -0.7602, 1.3534],
    [-0.7939, 0.2022, 0.384, 1.0037],
    [0.2931, 0.2621, 0.8441, 1.4182],
    [0.7975, 0.0693, 0.9871, 0.6972],
    [-0.3249, -0.2012, 0.3906, 1.3317],
    [-0.7226, 0.2128, -0.7327, 1.2091],
];

/// Every law at its grid: the theta and eta laws on 20 points, the Appell
/// and Mordell inversions on 10 each.
pub fn default_law_grid() -> Vec<LawCase> {
    let mut out = Vec::new();
    for law in TransformLaw::ALL {
        match law {
            TransformLaw::AppellInversion => out.extend(APPELL_POINTS.iter().map(|p| LawCase {
                law,
                point: LawPoint {
                    z: ORIGIN,
                    tau: c(p[4], p[5]),
                    u: c(p[0], p[1]),
                    v: c(p[2], p[3]),
                },
            })),
            TransformLaw::MordellInversion => {
                out.extend(MORDELL_POINTS.iter().map(|p| zt_case(law, p)))
            }
            _ => out.extend(THETA_POINTS.iter().map(|p| zt_case(law, p))),
        }
    }
    out
}

fn zt_case(law: TransformLaw, p: &[f64; 4]) -> LawCase {
    LawCase {
        law,
        point: LawPoint {
            z: c(p[0], p[1]),
            tau: c(p[2], p[3]),
            u: ORIGIN,
            v: ORIGIN,
        },
    }
}

/// The six `z` values against `tau = 0.9i` and `tau = 0.5 + 0.8i`.
pub fn default_decomposition_grid() -> Vec<DecompositionPoint> {
    let zs = [0.1, 0.2, 1.0 / 3.0, 0.45, 0.6, 0.85];
    let taus = [(c(0.0, 0.9), 150), (c(0.5, 0.8), 170)];
    taus.iter()
        .flat_map(|&(tau, order)| {
            zs.iter().map(move |&z| DecompositionPoint {
                z: c(z, 0.0),
                tau,
                order,
            })
        })
        .collect()
}

/// Row of a law grid file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LawGridRecord {
    pub law: String,
    pub z_re: f64,
    pub z_im: f64,
    pub tau_re: f64,
    pub tau_im: f64,
    #[serde(default)]
    pub u_re: f64,
    #[serde(default)]
    pub u_im: f64,
    #[serde(default)]
    pub v_re: f64,
    #[serde(default)]
    pub v_im: f64,
}

/// Row of a decomposition grid file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DecompositionGridRecord {
    pub z_re: f64,
    pub z_im: f64,
    pub tau_re: f64,
    pub tau_im: f64,
    pub order: usize,
}

pub fn law_by_name(name: &str) -> Option<TransformLaw> {
    TransformLaw::ALL.into_iter().find(|l| l.name() == name)
}

/// Reads `law,z_re,z_im,tau_re,tau_im[,u_re,u_im,v_re,v_im]` rows.
pub fn read_law_grid<R: Read>(reader: R) -> Result<Vec<LawCase>, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<LawGridRecord>().enumerate() {
        let rec = rec?;
        let law = law_by_name(&rec.law).ok_or_else(|| IoError::Invalid {
            line: i + 2,
            reason: format!("unknown law `{}`", rec.law),
        })?;
        out.push(LawCase {
            law,
            point: LawPoint {
                z: c(rec.z_re, rec.z_im),
                tau: c(rec.tau_re, rec.tau_im),
                u: c(rec.u_re, rec.u_im),
                v: c(rec.v_re, rec.v_im),
            },
        });
    }
    Ok(out)
}

/// Reads `z_re,z_im,tau_re,tau_im,order` rows.
pub fn read_decomposition_grid<R: Read>(reader: R) -> Result<Vec<DecompositionPoint>, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<DecompositionGridRecord>().enumerate() {
        let rec = rec?;
        if rec.order == 0 {
            return Err(IoError::Invalid {
                line: i + 2,
                reason: "order must be at least 1".into(),
            });
        }
        out.push(DecompositionPoint {
            z: c(rec.z_re, rec.z_im),
            tau: c(rec.tau_re, rec.tau_im),
            order: rec.order,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grids_have_documented_shape() {
        let laws = default_law_grid();
        assert_eq!(laws.len(), 6 * 20 + 10 + 10);
        for case in &laws {
            assert!(case.point.tau.im >= 0.3 && case.point.tau.re.abs() <= 1.0);
            assert!(case.point.z.norm() <= 1.0);
        }
        let decomposition = default_decomposition_grid();
        assert_eq!(decomposition.len(), 12);
        assert!(decomposition
            .iter()
            .all(|p| ![0.0, 0.25, 0.5, 0.75].contains(&p.z.re)));
    }

    #[test]
    fn law_names_round_trip() {
        for law in TransformLaw::ALL {
            assert_eq!(law_by_name(law.name()), Some(law));
        }
        assert_eq!(law_by_name("nope"), None);
    }

    #[test]
    fn grid_files() {
        let text = "law,z_re,z_im,tau_re,tau_im\ntheta-shift-1, 0.1, 0.2, 0.0, 1.0\n";
        let cases = read_law_grid(text.as_bytes()).unwrap();
        assert_eq!(cases[0].law, TransformLaw::ThetaShiftOne);
        assert_eq!(cases[0].point.u, ORIGIN);
        assert!(read_law_grid("law,z_re,z_im,tau_re,tau_im\nbogus,0,0,0,1\n".as_bytes()).is_err());
        let d =
            read_decomposition_grid("z_re,z_im,tau_re,tau_im,order\n0.2,0,0,0.9,120\n".as_bytes())
                .unwrap();
        assert_eq!(d[0].order, 120);
        assert!(read_decomposition_grid(
            "z_re,z_im,tau_re,tau_im,order\n0.2,0,0,0.9,0\n".as_bytes()
        )
        .is_err());
    }
}
