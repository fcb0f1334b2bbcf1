//! Split-operator propagation of a free Gaussian and of a packet on 2pσu.
//!
//! `cargo run --release --example wave_packet`

use std::sync::Arc;

use h2pulse::grid::{Channel, RadialGrid, WavePacket};
use h2pulse::molecular::MolecularDataset;
use h2pulse::propagator::SplitOperator;
use num_complex::Complex64;

fn main() -> h2pulse::Result<()> {
    let ds = MolecularDataset::bundled();
    let grid = Arc::new(RadialGrid::standard());
    let (mass, dt, sigma) = (ds.reduced_mass, 0.5, 0.2);
    let gaussian = |r0: f64| {
        let mut wp = WavePacket::from_fn(grid.clone(), Channel::U, |r| {
            Complex64::new((-(r - r0).powi(2) / (4.0 * sigma * sigma)).exp(), 0.0)
        });
        let n = wp.norm2().sqrt();
        wp.scale(1.0 / n);
        wp
    };

    let mut free = gaussian(10.0);
    let mut on_u = gaussian(1.4);
    let zero = vec![0.0; grid.len()];
    let v_u = ds.v_u.sample(grid.r())?;
    let mut split = SplitOperator::new(grid.clone(), mass, dt, false);
    println!("{:>8} {:>10} {:>10} {:>10}", "t (au)", "width", "<R> on u", "norm");
    for k in 0..=1500 {
        if k % 150 == 0 {
            let t = k as f64 * dt;
            let o = free.observables();
            let mean = o.mean_r.unwrap_or(f64::NAN);
            let width = (free.amp().iter().zip(grid.r()).map(|(a, r)| a.norm_sqr() * (r - mean).powi(2)).sum::<f64>()
                * grid.dr())
            .sqrt();
            println!("{t:>8.1} {width:>10.4} {:>10.3} {:>10.8}", on_u.mean_r()?, on_u.norm2());
        }
        split.step_in_potential(&mut free, &zero);
        split.step_in_potential(&mut on_u, &v_u);
    }
    Ok(())
}
