use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use super::{HeartRate, SubjectPair, SynthSignal, SynthSpec};
use crate::error::{Error, Result};
use crate::signal::{Condition, SampleRate, SignalRecord};

pub const HR_MIN_BPM: f64 = 30.0;
pub const HR_MAX_BPM: f64 = 220.0;

/// PQRST template as Gaussian bumps `(offset from R peak [s], amplitude, width [s])`.
/// Widths are chosen so every wave spans at least two samples at 50 Hz.
pub const BEAT_TEMPLATE: [(f64, f64, f64); 5] = [
    (-0.20, 0.15, 0.030),
    (-0.04, -0.12, 0.012),
    (0.00, 1.00, 0.018),
    (0.04, -0.25, 0.012),
    (0.28, 0.30, 0.050),
];

const TEMPLATE_PEAK: f64 = 1.0;
const RENDER_MARGIN_S: f64 = 0.6;

fn draw_rate<R: Rng>(rng: &mut R, hr: HeartRate) -> f64 {
    if hr.hr_sd_bpm <= 0.0 {
        return hr.hr_bpm.clamp(HR_MIN_BPM, HR_MAX_BPM);
    }
    let dist = Normal::new(hr.hr_bpm, hr.hr_sd_bpm).expect("validated sd");
    loop {
        let r = dist.sample(rng);
        if (HR_MIN_BPM..=HR_MAX_BPM).contains(&r) {
            return r;
        }
    }
}

/// R-peak times covering `[-margin, duration + margin]`. Each beat draws its
/// own rate from a normal distribution truncated to `[30, 220]` bpm; the
/// following beat comes `60 / rate` seconds later.
pub fn beat_times<R: Rng>(rng: &mut R, hr: HeartRate, duration_s: f64) -> Vec<f64> {
    let first_ibi = 60.0 / draw_rate(rng, hr);
    let mut t = -rng.random::<f64>() * first_ibi;
    let mut out = Vec::new();
    while t < duration_s + RENDER_MARGIN_S {
        out.push(t);
        t += 60.0 / draw_rate(rng, hr);
    }
    out
}

/// Render beats at the given R-peak times onto `n` samples at `fs`.
pub fn render_beats(beats: &[f64], fs: f64, n: usize) -> Vec<f64> {
    let mut x = vec![0.0; n];
    for &r in beats {
        for &(offset, amp, width) in &BEAT_TEMPLATE {
            let centre = r + offset;
            let lo = ((centre - 5.0 * width) * fs).ceil().max(0.0) as usize;
            let hi = (((centre + 5.0 * width) * fs).floor().max(-1.0) + 1.0) as usize;
            for (i, xi) in x.iter_mut().enumerate().take(hi.min(n)).skip(lo) {
                let z = (i as f64 / fs - centre) / width;
                *xi += amp * (-0.5 * z * z).exp();
            }
        }
    }
    x
}

pub fn gen_ecg(spec: &SynthSpec, index: usize) -> Result<SubjectPair> {
    let SynthSignal::Ecg { baseline, stress } = spec.signal else {
        return Err(Error::invalid("gen_ecg needs an ecg spec"));
    };
    let mut rng = spec.subject_rng(index);
    let fs = spec.fs as f64;
    let n = spec.samples_per_condition();
    let mut segment = |hr: HeartRate| -> Vec<f64> {
        let beats = beat_times(&mut rng, hr, spec.duration_s);
        let mut x = render_beats(&beats, fs, n);
        for v in &mut x {
            let eps: f64 = rng.sample(StandardNormal);
            *v += spec.noise * TEMPLATE_PEAK * eps;
        }
        x
    };
    let b = segment(baseline);
    let s = segment(stress);
    let id = SynthSpec::subject_id(index);
    let rate = SampleRate::hz_int(spec.fs);
    Ok(SubjectPair {
        baseline: SignalRecord::new(&id, Condition::baseline(), "ecg", rate, b)?,
        stress: SignalRecord::new(&id, Condition::stress(), "ecg", rate, s)?,
    })
}
