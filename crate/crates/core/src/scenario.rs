//! Scenario description: base stations, users and their computation tasks,
//! content popularity, prices, and the fading channel realization.
//!
//! All quantities are stored in SI base units (bits, Hz, bps, CPU cycles,
//! Joules, seconds, meters). Construction is deterministic given the seed;
//! scenarios are immutable afterwards and safe to share across threads.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{kahan_sum, AbsExt, Mat};

/// Base station class. Macro and small cells differ only in the parameters
/// attached to them; the solver treats both uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BsKind {
    Macro,
    Small,
}

/// One base station together with the prices its infrastructure provider
/// charges the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseStation {
    pub id: usize,
    pub kind: BsKind,
    /// Spectrum bandwidth `B_n` (Hz).
    pub bandwidth_hz: f64,
    /// Compute capability `F_n` (CPU cycles/s).
    pub compute_capability_cps: f64,
    /// Maximum number of simultaneously hosted tasks `D_n`.
    pub max_tasks: u32,
    /// Cache space `Z_n` (bits).
    pub cache_capacity_bits: f64,
    /// Energy drawn per CPU cycle `e_n` (J/cycle).
    pub energy_per_cycle_j: f64,
    /// Spectrum price (units/Hz).
    pub spectrum_price: f64,
    /// Backhaul price (units/bps); saved when content is served from cache.
    pub backhaul_price: f64,
    /// Energy price (units/J).
    pub energy_price: f64,
    /// Cache price for content stored before computation (units/bit).
    pub cache_price_before: f64,
    /// Cache price for content stored after computation (units/bit).
    pub cache_price_after: f64,
    /// Planar position (m).
    pub position: [f64; 2],
}

/// A user's offloaded computation task.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationTask {
    /// Content size before computation `z_u` (bits).
    pub input_size_bits: f64,
    /// Content size after computation `z'_u` (bits).
    pub output_size_bits: f64,
    /// CPU cycles required `c_u`.
    pub cycles: f64,
    /// Minimum computation rate `R^cp_u` (bps).
    pub min_compute_rate_bps: f64,
    /// Popularity index of the input content.
    pub content_before: usize,
    /// Popularity index of the output content.
    pub content_after: usize,
    /// Backhaul download time of the input content (s).
    pub download_time_before_s: f64,
    /// Backhaul download time of the output content (s).
    pub download_time_after_s: f64,
}

/// A subscriber of one service provider.
#[derive(Debug, Clone, PartialEq)]
pub struct User {
    pub id: usize,
    /// Index of the service provider the user belongs to.
    pub sp_id: usize,
    pub task: ComputationTask,
    /// Minimum communication rate `R^cm_u` (bps).
    pub min_comm_rate_bps: f64,
    /// Access price the user pays (units/bps).
    pub access_price: f64,
    /// Computation price the user pays (units/bps).
    pub compute_price: f64,
    /// Planar position (m).
    pub position: [f64; 2],
}

/// Ranked content popularity; a probability per content index.
#[derive(Debug, Clone, PartialEq)]
pub struct PopularityModel {
    pub catalog_size: usize,
    pub exponent: f64,
    pub probabilities: Vec<f64>,
}

impl PopularityModel {
    /// Maps a uniform draw in `[0, 1)` to a content index by inverse CDF.
    pub fn sample(&self, uniform: f64) -> usize {
        let mut acc = 0.0;
        for (f, p) in self.probabilities.iter().enumerate() {
            acc += p;
            if uniform < acc {
                return f;
            }
        }
        self.catalog_size - 1
    }
}

/// One draw of the fading channel: spectral efficiencies for every
/// (user, base station) pair plus the parameters that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `r[u][n]` in bps/Hz.
    pub spectral_efficiency: Mat,
    pub tx_power_dbm: f64,
    pub noise_psd_dbm_hz: f64,
    pub path_loss_exponent: f64,
    pub rng_seed: u64,
}

/// Complete, validated problem scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub base_stations: Vec<BaseStation>,
    pub users: Vec<User>,
    pub sp_count: usize,
    pub popularity: PopularityModel,
    pub channel: ChannelRealization,
}

/// Errors from scenario construction and validation.
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioError {
    /// An operation argument violated its precondition.
    InvalidArgument(String),
    /// A field of an assembled scenario violated an invariant.
    Validation { field: String, message: String },
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioError::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            ScenarioError::Validation { field, message } => write!(f, "{field}: {message}"),
        }
    }
}

fn invalid(field: &str, message: &str) -> ScenarioError {
    ScenarioError::Validation {
        field: String::from(field),
        message: String::from(message),
    }
}

/// Zipf popularity over a catalog of `catalog_size` contents:
/// `p_f = f^-exponent / sum_j j^-exponent`. `exponent = 0` gives the
/// uniform distribution.
pub fn zipf_popularity(catalog_size: usize, exponent: f64) -> Result<PopularityModel, ScenarioError> {
    if catalog_size == 0 {
        return Err(ScenarioError::InvalidArgument(String::from(
            "catalog_size must be at least 1",
        )));
    }
    if !(exponent >= 0.0) {
        return Err(ScenarioError::InvalidArgument(String::from(
            "exponent must be non-negative",
        )));
    }
    let weights: Vec<f64> = (1..=catalog_size)
        .map(|f| libm::pow(f as f64, -exponent))
        .collect();
    let total = kahan_sum(weights.iter().copied());
    let probabilities = weights.iter().map(|w| w / total).collect();
    Ok(PopularityModel {
        catalog_size,
        exponent,
        probabilities,
    })
}

/// Expected backhaul rate saved by caching one content: request probability
/// times size over the backhaul download time, in bps.
pub fn caching_gain(
    probability: f64,
    size_bits: f64,
    download_time_s: f64,
) -> Result<f64, ScenarioError> {
    if !(0.0..=1.0).contains(&probability) {
        return Err(ScenarioError::InvalidArgument(String::from(
            "probability must lie in [0, 1]",
        )));
    }
    if !(size_bits > 0.0) {
        return Err(ScenarioError::InvalidArgument(String::from(
            "size_bits must be positive",
        )));
    }
    if !(download_time_s > 0.0) {
        return Err(ScenarioError::InvalidArgument(String::from(
            "download_time_s must be positive",
        )));
    }
    Ok(probability * size_bits / download_time_s)
}

fn dbm_to_watt(dbm: f64) -> f64 {
    libm::pow(10.0, (dbm - 30.0) / 10.0)
}

/// Shannon spectral efficiency per Hz of bandwidth: `log2(1 + P*g / N0)`
/// with the noise power spectral density referenced to 1 Hz.
pub fn spectral_efficiency(tx_power_dbm: f64, noise_psd_dbm_hz: f64, channel_gain: f64) -> f64 {
    let snr = dbm_to_watt(tx_power_dbm) * channel_gain / dbm_to_watt(noise_psd_dbm_hz);
    libm::log2(1.0 + snr)
}

/// Mean channel power at distance `d`: `1/(1+d)^alpha`.
pub fn fading_variance(distance_m: f64, path_loss_exponent: f64) -> f64 {
    libm::pow(1.0 + distance_m, -path_loss_exponent)
}

fn distance(a: [f64; 2], b: [f64; 2]) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

/// RNG stream carrying user `u`'s attribute draws.
fn user_attribute_rng(seed: u64, user: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * user as u64 + 1);
    rng
}

/// RNG stream carrying user `u`'s channel draws.
fn user_channel_rng(seed: u64, user: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * user as u64 + 2);
    rng
}

/// Draws Rayleigh-faded spectral efficiencies for every (user, BS) pair.
///
/// The complex channel coefficient has variance `1/(1+d)^alpha`, so the
/// channel power `|h|^2` is exponential with that mean; it is sampled by
/// inverse CDF. Each user consumes an independent RNG stream derived from
/// the seed, which keeps existing rows unchanged when users are appended.
pub fn draw_channel(
    base_stations: &[BaseStation],
    users: &[User],
    tx_power_dbm: f64,
    noise_psd_dbm_hz: f64,
    path_loss_exponent: f64,
    seed: u64,
) -> Result<ChannelRealization, ScenarioError> {
    if !(path_loss_exponent > 0.0) {
        return Err(ScenarioError::InvalidArgument(String::from(
            "path_loss_exponent must be positive",
        )));
    }
    let mut r = Mat::zeros(users.len(), base_stations.len());
    for (u, user) in users.iter().enumerate() {
        let mut rng = user_channel_rng(seed, u);
        for (n, bs) in base_stations.iter().enumerate() {
            let variance = fading_variance(distance(user.position, bs.position), path_loss_exponent);
            let gain = variance * -libm::log(1.0 - rng.gen::<f64>());
            r[(u, n)] = spectral_efficiency(tx_power_dbm, noise_psd_dbm_hz, gain);
        }
    }
    Ok(ChannelRealization {
        spectral_efficiency: r,
        tx_power_dbm,
        noise_psd_dbm_hz,
        path_loss_exponent,
        rng_seed: seed,
    })
}

/// Ranges and prices used when drawing users at random.
#[derive(Debug, Clone, PartialEq)]
pub struct UserDistribution {
    /// Center of the user disc (typically the first BS position).
    pub center: [f64; 2],
    /// Radius of the user disc (m).
    pub cell_radius_m: f64,
    /// Uniform range of input content sizes (bits).
    pub input_size_bits: (f64, f64),
    /// Uniform range of output content sizes (bits).
    pub output_size_bits: (f64, f64),
    /// Uniform range of required CPU cycles.
    pub cycles: (f64, f64),
    /// Uniform range of backhaul download times (s), for both contents.
    pub download_time_s: (f64, f64),
    pub min_comm_rate_bps: f64,
    pub min_compute_rate_bps: f64,
    /// Access price `alpha_u` (units/bps); drawn uniformly from the range.
    pub access_price: (f64, f64),
    /// Computation price `phi_u` (units/bps); drawn uniformly from the range.
    pub compute_price: (f64, f64),
}

impl Default for UserDistribution {
    fn default() -> Self {
        // Content sizes and cycle counts follow the simulation setup
        // (1-4 Mb contents, 100-1300 Megacycles); prices use per-SI-unit
        // equivalents of the reference price table.
        Self {
            center: [0.0, 0.0],
            cell_radius_m: 250.0,
            input_size_bits: (1e6, 4e6),
            output_size_bits: (1e6, 4e6),
            cycles: (100e6, 1300e6),
            download_time_s: (0.01, 0.05),
            min_comm_rate_bps: 1e5,
            min_compute_rate_bps: 1e5,
            access_price: (1e-5, 1e-5),
            compute_price: (100.0, 100.0),
        }
    }
}

fn draw_range(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.gen_range(lo..hi)
    } else {
        lo
    }
}

/// Draws `count` users. User `u` depends only on `(seed, u)`, so growing
/// `count` appends users without disturbing earlier ones.
pub fn generate_users(
    dist: &UserDistribution,
    popularity: &PopularityModel,
    sp_count: usize,
    count: usize,
    seed: u64,
) -> Vec<User> {
    (0..count)
        .map(|u| {
            let mut rng = user_attribute_rng(seed, u);
            let angle = rng.gen::<f64>() * 2.0 * core::f64::consts::PI;
            let radius = dist.cell_radius_m * libm::sqrt(rng.gen::<f64>());
            let position = [
                dist.center[0] + radius * libm::cos(angle),
                dist.center[1] + radius * libm::sin(angle),
            ];
            let input_size_bits = draw_range(&mut rng, dist.input_size_bits);
            let output_size_bits = draw_range(&mut rng, dist.output_size_bits);
            let cycles = draw_range(&mut rng, dist.cycles);
            let content_before = popularity.sample(rng.gen::<f64>());
            let content_after = popularity.sample(rng.gen::<f64>());
            let download_time_before_s = draw_range(&mut rng, dist.download_time_s);
            let download_time_after_s = draw_range(&mut rng, dist.download_time_s);
            let access_price = draw_range(&mut rng, dist.access_price);
            let compute_price = draw_range(&mut rng, dist.compute_price);
            User {
                id: u,
                sp_id: u % sp_count.max(1),
                task: ComputationTask {
                    input_size_bits,
                    output_size_bits,
                    cycles,
                    min_compute_rate_bps: dist.min_compute_rate_bps,
                    content_before,
                    content_after,
                    download_time_before_s,
                    download_time_after_s,
                },
                min_comm_rate_bps: dist.min_comm_rate_bps,
                access_price,
                compute_price,
                position,
            }
        })
        .collect()
}

/// Validates invariants and draws the channel, producing a [`Scenario`].
pub fn assemble(
    base_stations: Vec<BaseStation>,
    users: Vec<User>,
    sp_count: usize,
    popularity: PopularityModel,
    tx_power_dbm: f64,
    noise_psd_dbm_hz: f64,
    path_loss_exponent: f64,
    seed: u64,
) -> Result<Scenario, ScenarioError> {
    let channel = draw_channel(
        &base_stations,
        &users,
        tx_power_dbm,
        noise_psd_dbm_hz,
        path_loss_exponent,
        seed,
    )?;
    let scenario = Scenario {
        base_stations,
        users,
        sp_count,
        popularity,
        channel,
    };
    scenario.validate()?;
    Ok(scenario)
}

impl Scenario {
    pub fn user_count(&self) -> usize {
        self.users.len()
    }

    pub fn bs_count(&self) -> usize {
        self.base_stations.len()
    }

    /// Checks every structural invariant, naming the offending field.
    ///
    /// Requirements that merely make the optimization infeasible (for
    /// example a rate no single BS can deliver) are accepted here; the
    /// solvers report those.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.base_stations.is_empty() {
            return Err(invalid("base_stations", "at least one base station required"));
        }
        if self.users.is_empty() {
            return Err(invalid("users", "at least one user required"));
        }
        if self.sp_count == 0 {
            return Err(invalid("sp_count", "must be at least 1"));
        }
        for (n, bs) in self.base_stations.iter().enumerate() {
            let field = |name: &str| format!("bss[{n}].{name}");
            if !(bs.bandwidth_hz > 0.0) {
                return Err(invalid(&field("bandwidth"), "must be positive"));
            }
            if !(bs.compute_capability_cps > 0.0) {
                return Err(invalid(&field("compute_capability"), "must be positive"));
            }
            if bs.max_tasks < 1 {
                return Err(invalid(&field("max_tasks"), "must be at least 1"));
            }
            if !(bs.cache_capacity_bits >= 0.0) {
                return Err(invalid(&field("cache_capacity"), "must be non-negative"));
            }
            if !(bs.energy_per_cycle_j > 0.0) {
                return Err(invalid(&field("energy_per_cycle"), "must be positive"));
            }
            for (name, price) in [
                ("spectrum_price", bs.spectrum_price),
                ("backhaul_price", bs.backhaul_price),
                ("energy_price", bs.energy_price),
                ("cache_price_before", bs.cache_price_before),
                ("cache_price_after", bs.cache_price_after),
            ] {
                if !(price >= 0.0) {
                    return Err(invalid(&field(name), "price must be non-negative"));
                }
            }
            if !bs.position.iter().all(|p| p.is_finite()) {
                return Err(invalid(&field("position"), "must be finite"));
            }
        }
        for (u, user) in self.users.iter().enumerate() {
            let field = |name: &str| format!("users[{u}].{name}");
            if user.sp_id >= self.sp_count {
                return Err(invalid(&field("sp"), "service provider index out of range"));
            }
            if !(user.min_comm_rate_bps >= 0.0) {
                return Err(invalid(&field("min_comm_rate"), "must be non-negative"));
            }
            for (name, price) in [
                ("access_price", user.access_price),
                ("compute_price", user.compute_price),
            ] {
                if !(price >= 0.0) {
                    return Err(invalid(&field(name), "price must be non-negative"));
                }
            }
            let t = &user.task;
            if !(t.input_size_bits > 0.0) {
                return Err(invalid(&field("task.input_size"), "must be positive"));
            }
            if !(t.output_size_bits > 0.0) {
                return Err(invalid(&field("task.output_size"), "must be positive"));
            }
            if !(t.cycles > 0.0) {
                return Err(invalid(&field("task.cycles"), "must be positive"));
            }
            if !(t.min_compute_rate_bps >= 0.0) {
                return Err(invalid(&field("task.min_compute_rate"), "must be non-negative"));
            }
            if !(t.download_time_before_s > 0.0) {
                return Err(invalid(&field("task.download_time_before"), "must be positive"));
            }
            if !(t.download_time_after_s > 0.0) {
                return Err(invalid(&field("task.download_time_after"), "must be positive"));
            }
            if t.content_before >= self.popularity.catalog_size {
                return Err(invalid(&field("task.content_before"), "content index out of range"));
            }
            if t.content_after >= self.popularity.catalog_size {
                return Err(invalid(&field("task.content_after"), "content index out of range"));
            }
            if !user.position.iter().all(|p| p.is_finite()) {
                return Err(invalid(&field("position"), "must be finite"));
            }
        }
        let p = &self.popularity;
        if p.probabilities.len() != p.catalog_size {
            return Err(invalid("popularity.probabilities", "length must equal catalog_size"));
        }
        let sum = kahan_sum(p.probabilities.iter().copied());
        if (sum - 1.0).abs_() > 1e-12 {
            return Err(invalid("popularity.probabilities", "must sum to 1"));
        }
        if p.probabilities.windows(2).any(|w| w[1] > w[0]) {
            return Err(invalid(
                "popularity.probabilities",
                "must be non-increasing in content index",
            ));
        }
        let ch = &self.channel;
        if ch.spectral_efficiency.shape() != (self.users.len(), self.base_stations.len()) {
            return Err(invalid("channel.spectral_efficiency", "shape must be users x bss"));
        }
        if ch.spectral_efficiency.data().iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(invalid(
                "channel.spectral_efficiency",
                "entries must be finite and non-negative",
            ));
        }
        if !(ch.path_loss_exponent > 0.0) {
            return Err(invalid("channel.path_loss_exponent", "must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zipf_single_content() {
        let p = zipf_popularity(1, 1.2).unwrap();
        assert_eq!(p.probabilities, alloc::vec![1.0]);
    }

    #[test]
    fn zipf_uniform_when_exponent_zero() {
        let p = zipf_popularity(4, 0.0).unwrap();
        for &v in &p.probabilities {
            assert_relative_eq!(v, 0.25, max_relative = 1e-15);
        }
    }

    #[test]
    fn zipf_matches_hand_harmonic_sum() {
        // catalog 3, exponent 1: weights 1, 1/2, 1/3; total 11/6.
        let p = zipf_popularity(3, 1.0).unwrap();
        assert_relative_eq!(p.probabilities[0], 6.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(p.probabilities[1], 3.0 / 11.0, max_relative = 1e-14);
        assert_relative_eq!(p.probabilities[2], 2.0 / 11.0, max_relative = 1e-14);
    }

    #[test]
    fn zipf_rejects_empty_catalog() {
        assert!(matches!(
            zipf_popularity(0, 1.0),
            Err(ScenarioError::InvalidArgument(_))
        ));
    }

    #[test]
    fn caching_gain_examples() {
        assert_relative_eq!(caching_gain(0.5, 4e6, 2.0).unwrap(), 1e6);
        assert_eq!(caching_gain(0.0, 1e6, 1.0).unwrap(), 0.0);
        assert_relative_eq!(caching_gain(1.0, 1e6, 1.0).unwrap(), 1e6);
        assert!(matches!(
            caching_gain(0.5, 1e6, 0.0),
            Err(ScenarioError::InvalidArgument(_))
        ));
    }

    #[test]
    fn spectral_efficiency_unit_snr() {
        // P/N0 chosen so that SNR = 1 at unit gain: log2(2) = 1 bps/Hz.
        assert_relative_eq!(spectral_efficiency(0.0, 0.0, 1.0), 1.0, max_relative = 1e-14);
        assert_eq!(spectral_efficiency(27.0, -174.0, 0.0), 0.0);
    }

    #[test]
    fn spectral_efficiency_matches_db_domain_chain() {
        // Independent route: work entirely in dB. At d = 100 m with path
        // loss exponent 4 and |h|^2 at its mean, SNR_dB = P_dBm - N0_dBm
        // - 40 log10(1 + d).
        let d = 100.0;
        let alpha = 4.0;
        let gain = fading_variance(d, alpha);
        let got = spectral_efficiency(27.0, -174.0, gain);
        let snr_db = 27.0 - (-174.0) - 10.0 * alpha * libm::log10(1.0 + d);
        let expected = libm::log2(1.0 + libm::pow(10.0, snr_db / 10.0));
        assert_relative_eq!(got, expected, max_relative = 1e-12);
    }

    fn small_bs(id: usize, position: [f64; 2]) -> BaseStation {
        BaseStation {
            id,
            kind: if id == 0 { BsKind::Macro } else { BsKind::Small },
            bandwidth_hz: 10e6,
            compute_capability_cps: 10e9,
            max_tasks: 10,
            cache_capacity_bits: 10e6,
            energy_per_cycle_j: 1e-9,
            spectrum_price: 2e-3,
            backhaul_price: 1e-5,
            energy_price: 60e-6,
            cache_price_before: 1e-5,
            cache_price_after: 1e-5,
            position,
        }
    }

    fn demo_scenario(seed: u64, users: usize) -> Scenario {
        let popularity = zipf_popularity(10, 1.2).unwrap();
        let dist = UserDistribution::default();
        let generated = generate_users(&dist, &popularity, 2, users, seed);
        assemble(
            alloc::vec![small_bs(0, [0.0, 0.0]), small_bs(1, [150.0, 0.0])],
            generated,
            2,
            popularity,
            27.0,
            -174.0,
            4.0,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn channel_is_reproducible_and_nonnegative() {
        let a = demo_scenario(7, 5);
        let b = demo_scenario(7, 5);
        assert_eq!(a.channel.spectral_efficiency, b.channel.spectral_efficiency);
        assert!(a.channel.spectral_efficiency.data().iter().all(|&r| r >= 0.0));
    }

    #[test]
    fn user_generation_is_prefix_stable() {
        let five = demo_scenario(3, 5);
        let eight = demo_scenario(3, 8);
        assert_eq!(&eight.users[..5], &five.users[..]);
        for u in 0..5 {
            for n in 0..2 {
                assert_eq!(
                    five.channel.spectral_efficiency[(u, n)],
                    eight.channel.spectral_efficiency[(u, n)]
                );
            }
        }
    }

    #[test]
    fn mean_efficiency_decreases_with_distance() {
        // 1000 draws at 50 m vs 500 m from the BS.
        let bs = alloc::vec![small_bs(0, [0.0, 0.0])];
        let popularity = zipf_popularity(4, 1.0).unwrap();
        let mut mean = |d: f64, seed: u64| {
            let dist = UserDistribution {
                center: [d, 0.0],
                cell_radius_m: 0.0,
                ..UserDistribution::default()
            };
            let users = generate_users(&dist, &popularity, 1, 1000, seed);
            let ch = draw_channel(&bs, &users, 27.0, -174.0, 4.0, seed).unwrap();
            ch.spectral_efficiency.data().iter().sum::<f64>() / 1000.0
        };
        assert!(mean(50.0, 11) > mean(500.0, 11));
    }

    #[test]
    fn validate_names_bad_field() {
        let mut s = demo_scenario(1, 2);
        s.base_stations[1].max_tasks = 0;
        match s.validate() {
            Err(ScenarioError::Validation { field, .. }) => {
                assert_eq!(field, "bss[1].max_tasks");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }
}
