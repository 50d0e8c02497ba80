//! Seeded Monte Carlo estimation next to the exact enumeration it
//! approximates. Identical seeds give identical estimates, whatever the
//! thread count.
//!
//! Run with: cargo run --example monte_carlo

use repsel::generators::running_example;
use repsel::mechanisms::{
    default_guard, liquid_expected_weights, mc_expected_weights, MechanismSpec, Method,
};

fn main() {
    let gamma = running_example();
    let exact = liquid_expected_weights(&gamma, default_guard()).unwrap();

    let spec = MechanismSpec::liquid().with_method(Method::MonteCarlo {
        samples: 200_000,
        seed: 17,
    });
    let estimate = mc_expected_weights(&gamma, &spec).unwrap();
    let stderr = estimate.stderr().unwrap();

    println!("liquid democracy, 200k samples, seed 17:");
    println!("{:<6} {:>10} {:>10} {:>10}", "agent", "exact", "estimate", "stderr");
    for (j, (exact_w, est_w)) in exact
        .to_f64s()
        .iter()
        .zip(estimate.to_f64s())
        .enumerate()
    {
        println!(
            "{:<6} {:>10.5} {:>10.5} {:>10.5}",
            gamma.label(j),
            exact_w,
            est_w,
            stderr[j]
        );
    }

    let again = mc_expected_weights(&gamma, &spec).unwrap();
    println!(
        "\nsame seed reproduces the estimate exactly: {}",
        again == estimate
    );

    let other_seed = MechanismSpec::liquid().with_method(Method::MonteCarlo {
        samples: 200_000,
        seed: 18,
    });
    println!(
        "a different seed does not: {}",
        mc_expected_weights(&gamma, &other_seed).unwrap() != estimate
    );
}
