//! EVM, bit error rate, AWGN reference curves and interference statistics.

mod accum;
mod ber;
mod evm;
mod noise;

pub use accum::RunningStats;
pub use ber::{ber_awgn_64qam, ber_awgn_8pam, ber_awgn_pam, ber_empirical, BerCounter, BerResult};
pub use evm::{evm, EvmAccumulator, EvmResult};
pub use noise::{ks_gaussian, noise_statistics, Histogram, KsResult, NoiseStats, MIN_NOISE_SAMPLES, WHITENESS_THRESHOLD};
