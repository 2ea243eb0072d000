//! Minimal end-to-end run: assemble the default two-transmon system with
//! twin thermal baths, evolve the ground product state, and print how the
//! entanglement peaks and then drains away.
//!
//! ```sh
//! cargo run --release --example quickstart
//! ```

use tqsim::bath::{jump_channels, BathIndex, BathParams};
use tqsim::circuit::{composite_hamiltonian, CircuitParams};
use tqsim::dynamics::{evolve_sampled, EvolveMode};
use tqsim::measures::MeasureSeries;
use tqsim::states;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = CircuitParams::new(1.0, 100.0, 0.2, 10)?;
    let system = composite_hamiltonian(&params)?;
    let w01 = system.omega01;

    let bath = BathParams::new(0.05 * w01, 5.0 / w01, 50.0 * w01)?;
    let channels = vec![
        jump_channels(&system, BathIndex::One, &bath),
        jump_channels(&system, BathIndex::Two, &bath),
    ];

    let rho0 = states::preset("00").expect("known preset");
    let traj = evolve_sampled(
        &rho0,
        &system,
        &channels,
        20.0,
        1e-3,
        EvolveMode::Lindblad,
        10,
    )?;
    let series = MeasureSeries::from_trajectory(&traj)?;

    let (mut peak, mut peak_tau) = (0.0f64, 0.0f64);
    for (&tau, &ln) in series.tau.iter().zip(&series.log_negativity) {
        if ln > peak {
            peak = ln;
            peak_tau = tau;
        }
    }
    println!("two lowest composite levels split by omega01 = {w01:.6}");
    println!("log negativity peaks at {peak:.6} ebits near tau = {peak_tau:.3}");
    println!(
        "by tau = {:.0} it has settled to {:.2e}",
        series.tau.last().unwrap(),
        series.log_negativity.last().unwrap()
    );
    Ok(())
}
