use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::forward::FarFieldData;
use crate::specialfn::Complex;

/// Adds circular complex white Gaussian noise at `snr_db` relative to the
/// measured mean signal power of the whole data set.
///
/// `snr_db = +inf` returns the data unchanged. The output depends only on
/// `(data, snr_db, seed)`.
pub fn add_awgn(data: &FarFieldData, snr_db: f64, seed: u64) -> Result<FarFieldData> {
    if snr_db == f64::INFINITY {
        return Ok(data.clone());
    }
    if !snr_db.is_finite() {
        return Err(Error::Domain(format!("SNR must be finite or +inf, got {snr_db}")));
    }
    let values = data.values();
    if values.is_empty() {
        return Err(Error::Usage("cannot add noise to empty data".into()));
    }
    let power = signal_power(values);
    if power == 0.0 {
        return Err(Error::Usage(
            "signal power of all-zero data is undefined; cannot set an SNR".into(),
        ));
    }
    let variance = power / 10f64.powf(snr_db / 10.0);
    let normal = Normal::new(0.0, (0.5 * variance).sqrt())
        .map_err(|e| Error::Numerical(format!("noise distribution: {e}")))?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let noisy = values
        .iter()
        .map(|v| {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            v + Complex::new(re, im)
        })
        .collect();
    data.with_values(noisy)
}

/// Mean `|v|²` over all entries.
pub fn signal_power(values: &[Complex]) -> f64 {
    values.iter().map(|v| v.norm_sqr()).sum::<f64>() / values.len() as f64
}
