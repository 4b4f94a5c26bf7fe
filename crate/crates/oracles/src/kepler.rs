/// Solves `M = E - eps * sin(E)` for real `eps` in `[0, 1)` by Newton's
/// method and returns `E - M`.
pub fn eccentric_anomaly_offset(mean_anomaly: f64, eps: f64) -> f64 {
    let mut e = mean_anomaly;
    for _ in 0..100 {
        let f = e - eps * e.sin() - mean_anomaly;
        let df = 1.0 - eps * e.cos();
        let step = f / df;
        e -= step;
        if step.abs() < 1e-16 * (1.0 + e.abs()) {
            break;
        }
    }
    e - mean_anomaly
}
