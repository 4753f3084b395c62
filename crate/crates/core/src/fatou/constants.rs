use num_complex::Complex64;
use serde::Serialize;

use super::{FatouFrame, SectorSpec, ThetaSpec};
use crate::prec::{abs_f64, to_c64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Fitted,
    Assumed,
}

/// One fitted or assumed constant with the probe protocol that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantEntry {
    pub name: String,
    pub value: f64,
    pub provenance: Provenance,
    pub protocol: String,
    /// Smallest slack `bound − observed` of the defining inequality over the probe set.
    pub probe_margin: f64,
    pub probes: usize,
}

/// Stand-ins for the existence constants of the near-translation, derivative and fine-control
/// estimates. They are fitted per map and per α and are not the constants of any theorem.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstantsLedger {
    pub alpha: f64,
    pub map: String,
    pub entries: Vec<ConstantEntry>,
}

impl ConstantsLedger {
    pub fn get(&self, name: &str) -> Option<f64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }

    pub fn push(&mut self, name: &str, value: f64, provenance: Provenance, protocol: impl Into<String>, probe_margin: f64, probes: usize) {
        self.entries.retain(|e| e.name != name);
        self.entries.push(ConstantEntry { name: name.to_string(), value, provenance, protocol: protocol.into(), probe_margin, probes });
    }
}

/// Probe sizes for [`fit_constants`].
#[derive(Clone, Copy, Debug)]
pub struct ConstantsProtocol {
    pub r_band: f64,
    pub tau_samples: usize,
    pub derivative_samples: usize,
    pub drift_columns: usize,
    pub drift_heights: usize,
    pub sector_samples: usize,
    pub max_pullback: usize,
}

impl Default for ConstantsProtocol {
    fn default() -> Self {
        ConstantsProtocol {
            r_band: 0.25,
            tau_samples: 64,
            derivative_samples: 24,
            drift_columns: 3,
            drift_heights: 8,
            sector_samples: 48,
            max_pullback: 40,
        }
    }
}

fn c1_fit(frame: &FatouFrame, proto: &ConstantsProtocol) -> (f64, usize) {
    let alpha = frame.alpha_f64();
    let r = proto.r_band;
    let theta = ThetaSpec::new(r / alpha, alpha);
    let n = (proto.tau_samples as f64).sqrt().ceil() as usize;
    let mut c1: f64 = 0.0;
    let mut count = 0;
    for i in 0..n {
        for j in 0..n {
            let re = -0.5 / alpha + (i as f64 + 0.5) / n as f64 / alpha;
            let im = -4.0 / alpha + 8.0 / alpha * (j as f64 + 0.5) / n as f64;
            let w = Complex64::new(re, im);
            if !theta.contains(w) {
                continue;
            }
            if let Ok(z) = frame.lift.tau(&frame.c(re, im)) {
                let scale = alpha / r * (-2.0 * std::f64::consts::PI * alpha * im).exp();
                c1 = c1.max(abs_f64(&z) / scale);
                count += 1;
            }
        }
    }
    (c1, count)
}

/// Fits the ledger for one frame. `k_fit` heights run over the sector band and a bit above.
pub fn fit_constants(frame: &FatouFrame, proto: &ConstantsProtocol) -> ConstantsLedger {
    let alpha = frame.alpha_f64();
    let inv = 1.0 / alpha;
    let mut ledger = ConstantsLedger { alpha, map: frame.map().name().to_string(), ..Default::default() };

    let (c1, n1) = c1_fit(frame, proto);
    ledger.push(
        "C1",
        c1,
        Provenance::Fitted,
        format!("sup |tau(w)| / ((alpha/r) e^(-2 pi alpha Im w)) on a grid over Theta(r/alpha), r={}", proto.r_band),
        0.0,
        n1,
    );

    let r2 = frame.fit.radius;
    ledger.push(
        "C2",
        r2.unwrap_or(f64::NAN),
        if r2.is_some() { Provenance::Fitted } else { Provenance::Assumed },
        format!(
            "least R with sup |F-(w+1)| and sup |F'-1| below 1/4 on a {}x{} polar grid of Theta(R)",
            frame.fit.grid.radii, frame.fit.grid.angles
        ),
        0.0,
        frame.fit.samples,
    );

    // j0 and C4 from the critical orbit.
    let c2 = r2.unwrap_or(0.0);
    let mut w = frame.cp_lift.clone();
    let mut j0 = None;
    let mut c4: f64 = 0.0;
    let horizon = (2.0 / (3.0 * alpha)).ceil() as usize + 8;
    let mut orbit_len = 0;
    for j in 0..=horizon {
        if j0.is_none() && w.real().to_f64() >= c2 {
            j0 = Some(j);
        }
        if j >= 1 {
            let wc = to_c64(&w);
            let lj = 1.0 + (j as f64).ln();
            c4 = c4.max(wc.im.abs() / lj).max((wc.re - j as f64).abs() / lj);
        }
        orbit_len = j;
        match frame.lift.lift_f(&w) {
            Ok(next) => w = next,
            Err(_) => break,
        }
    }
    ledger.push(
        "j0",
        j0.map(|j| j as f64).unwrap_or(f64::NAN),
        Provenance::Fitted,
        "least i with Re F^i(cp) >= C2",
        0.0,
        orbit_len,
    );
    ledger.push(
        "C4",
        c4,
        Provenance::Fitted,
        "max over 1 <= j <= 2/(3 alpha)+8 of |Im F^j(cp)| and |Re F^j(cp) - j| divided by 1 + log j",
        0.0,
        orbit_len,
    );

    let heights: Vec<f64> = (0..=11).map(|i| -2.0 + 2.0 * i as f64).collect();
    let k_fit = frame.fit_k(&heights);
    ledger.push(
        "k",
        k_fit.map(|k| k as f64).unwrap_or(f64::NAN),
        Provenance::Fitted,
        "least k with the inverse coordinate valid (exists, round-trips, lands in Theta(C2)) on Re = floor(1/alpha) - k, Im in [-2,20]",
        0.0,
        heights.len(),
    );
    let k = k_fit.unwrap_or(0);

    // C5: stretch bounds of the inverse coordinate on 1 <= Re ζ <= 1/α − k.
    let right = (inv - k as f64).max(1.0);
    let n = proto.derivative_samples.max(1);
    let mut c5: f64 = 1.0;
    let mut count5 = 0;
    let h = 1e-8;
    for i in 0..n {
        let re = 1.0 + (right - 1.0) * (i as f64 + 0.5) / n as f64;
        for &im in &[-1.5, 0.0, 3.0, 10.0] {
            let at = |z: Complex64| frame.phi_inverse_unchecked(&frame.c(z.re, z.im)).map(|w| to_c64(&w));
            let z = Complex64::new(re.floor() + 0.5, im);
            let (Ok(px), Ok(mx), Ok(py), Ok(my)) =
                (at(z + h), at(z - h), at(z + Complex64::new(0.0, h)), at(z - Complex64::new(0.0, h)))
            else {
                continue;
            };
            let dx = (px - mx) / (2.0 * h);
            let dy = (py - my) / (2.0 * h);
            let d = 0.5 * (dx - Complex64::i() * dy);
            let db = 0.5 * (dx + Complex64::i() * dy);
            let big = d.norm() + db.norm();
            let small = (d.norm() - db.norm()).abs();
            c5 = c5.max(big).max(1.0 / small);
            count5 += 1;
        }
    }
    ledger.push(
        "C5",
        c5,
        Provenance::Fitted,
        "max of the largest stretch and the inverse smallest stretch of the inverse quasi-conformal coordinate (central differences) on 1 <= Re zeta <= 1/alpha - k; empirical analogue of the conformal bound",
        0.0,
        count5,
    );

    let c6 = (alpha * (c4 * (1.0 + (5.0 / (4.0 * alpha)).ln()) + 2.0 * c5)).max(1.0 + 1e-9);
    ledger.push("C6", c6, Provenance::Fitted, "smallest value with C4(1+log(5/(4 alpha))) + 2 C5 <= C6/alpha and C6 > 1", 0.0, 0);

    // C7: drift of the coordinate along vertical segments in Θ(r/α + 1).
    let r = proto.r_band;
    let theta = ThetaSpec::new(r / alpha + 1.0, alpha);
    let mut c7: f64 = 0.0;
    let mut count7 = 0;
    let cols = proto.drift_columns.max(1);
    for ci in 0..cols {
        let re = frame.base_a.to_f64() + (inv - 2.0 * frame.base_a.to_f64()) * (ci as f64 + 0.5) / cols as f64;
        let lo = (-c6 / alpha + 1.0).max(-3.0 / alpha);
        let hi = 3.0 / alpha;
        let ts: Vec<f64> = (0..proto.drift_heights).map(|j| lo + (hi - lo) * j as f64 / (proto.drift_heights.max(2) - 1) as f64).collect();
        let segment_ok = |a: f64, b: f64| (0..=16).all(|s| theta.contains(Complex64::new(re, a + (b - a) * s as f64 / 16.0)));
        let vals: Vec<Option<Complex64>> =
            ts.iter().map(|&t| frame.phi(&frame.c(re, t)).ok().map(|z| to_c64(&z))).collect();
        for a in 0..ts.len() {
            for b in a + 1..ts.len() {
                if let (Some(pa), Some(pb)) = (vals[a], vals[b]) {
                    if !segment_ok(ts[a], ts[b]) {
                        continue;
                    }
                    let d = pa - pb;
                    let drift_re = d.re.abs();
                    let drift_im = (d.im - (ts[a] - ts[b])).abs();
                    c7 = c7.max(r * drift_re.max(drift_im));
                    count7 += 1;
                }
            }
        }
    }
    ledger.push(
        "C7",
        c7,
        Provenance::Fitted,
        format!("max r * drift of Re and Im of the coordinate between points on common vertical segments in Theta(r/alpha+1), r={r}"),
        0.0,
        count7,
    );

    if let Some(kh) = frame.fit_k_h(k, proto.sector_samples, proto.max_pullback) {
        ledger.push(
            "k_h",
            kh as f64,
            Provenance::Fitted,
            "least k with every boundary sample of C u C# landing at 0 < Re Phi < floor(1/alpha) - k after F^-k(Phi^-1(zeta) + 1/alpha)",
            0.0,
            proto.sector_samples,
        );
    } else {
        ledger.push("k_h", f64::NAN, Provenance::Assumed, "no pullback depth up to the cap landed in the band", 0.0, proto.sector_samples);
    }

    let center = (0.5 * inv).floor();
    if let Ok(cloud) = frame.sector_extract(&SectorSpec::c().translated(center), proto.sector_samples) {
        ledger.push(
            "M",
            cloud.diameter / alpha,
            Provenance::Fitted,
            format!("diameter of the sector band at Re Phi = floor(1/(2 alpha)) = {center}, divided by alpha"),
            0.0,
            cloud.boundary.len(),
        );
    }
    ledger
}
