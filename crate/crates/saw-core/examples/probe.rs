use std::time::Instant;
use saw_core::anisotropy::*;
use saw_core::materials::*;

fn main() {
    let mat = load_material("assets/materials/quartz_293K.toml").unwrap();
    let t0 = Instant::now();
    let map = map::map_parameter_space(
        &mat, (-90.0, 90.0), (0.0, 180.0), 1.0,
        &MapOptions { with_k2: false, cache_dir: None },
    ).unwrap();
    println!("full 1-deg map: {:.1?}, holes {}", t0.elapsed(), map.hole_count());
    let t1 = Instant::now();
    let found = find_md_orientations(&mat, &map, &FindMdOptions::default()).unwrap();
    println!("find_md: {:.1?}, {} candidates", t1.elapsed(), found.len());
    for c in &found {
        println!(
            "  ({:7.2},{:7.2}) eta {:+8.5} gamma {:+8.4} |de/dp| {:.3} |dg/dp| {:.4} v {:8.2} {:?} k2 {:.4}% conv {} it {}",
            c.orientation.phi(), c.orientation.theta(), c.eta_residual, c.gamma_value,
            c.sens_eta, c.sens_gamma, c.velocity, c.polarization, c.k2 * 100.0, c.converged, c.iterations
        );
    }
}
