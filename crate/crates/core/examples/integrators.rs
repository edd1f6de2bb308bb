//! Runge-Kutta methods: real-axis stability limits and observed orders.

use blockfd::timestep::ode_order_selftest;
use blockfd::Method;

fn main() {
    for m in [Method::ForwardEuler, Method::Rk4, Method::Rk6] {
        println!(
            "{:<6} stages {}  stability limit {:.4}  observed order {:.3}",
            m.name(),
            m.tableau().stages(),
            m.stability_limit(),
            ode_order_selftest(m)
        );
    }
}
