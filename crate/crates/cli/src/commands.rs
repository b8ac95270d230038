use std::fs;
use std::path::Path;

use brw_core::config::RunConfig;
use brw_core::optimizer::{run_ga, BrwObjective, GaResult, GaSettings, Sphere, GENE_NAMES};
use brw_core::output::{format_number, Cell, CsvTable};
use brw_core::pipeline::{Simulation, SolvedMode};
use brw_core::spdc::{sensitivity_scan, StackParameter};
use brw_core::Result;

fn save(table: &CsvTable, out: &Path, name: &str) -> Result<()> {
    let path = out.join(name);
    table.save(&path)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn mode_line(label: &str, m: &SolvedMode) -> String {
    format!(
        "{:<7} {:<3} {:<6} {:>12.4} {:>12.6} {:>12.6} {:>12.6}",
        label,
        m.spec.polarization.name(),
        m.spec.class.name(),
        m.vertical.wavelength_um * 1e3,
        m.vertical.n_eff,
        m.n_eff_2d(),
        m.confinement,
    )
}

pub fn modes(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sim = Simulation::new(cfg.clone())?;
    let pump_um = sim.pump_wavelength_um()?;
    let set = sim.modes_at(pump_um)?;
    println!(
        "{:<7} {:<3} {:<6} {:>12} {:>12} {:>12} {:>12}",
        "mode", "pol", "class", "lambda_nm", "n_vertical", "n_eff", "confinement"
    );
    let mut table = CsvTable::new(&[
        "mode",
        "polarization",
        "class",
        "wavelength_nm",
        "n_eff_vertical",
        "n_eff",
        "confinement",
        "bloch_eigenvalue",
    ]);
    for (label, m) in [
        ("pump", &set.pump),
        ("signal", &set.signal),
        ("idler", &set.idler),
    ] {
        println!("{}", mode_line(label, m));
        table.push(&[
            label.into(),
            m.spec.polarization.name().into(),
            m.spec.class.name().into(),
            (m.vertical.wavelength_um * 1e3).into(),
            m.vertical.n_eff.into(),
            m.n_eff_2d().into(),
            m.confinement.into(),
            m.vertical.bloch_eigenvalue.into(),
        ]);
    }
    save(&table, out, "modes.csv")
}

pub fn jsa(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sim = Simulation::new(cfg.clone())?;
    let spectrum = sim.spectrum()?;
    let (ivg_s, ivg_i) = spectrum.phase.inverse_group_velocities()?;
    println!("pump_nm = {}", format_number(spectrum.pump_um * 1e3));
    println!(
        "signal_inverse_group_velocity_ns_per_m = {}",
        format_number(ivg_s)
    );
    println!(
        "idler_inverse_group_velocity_ns_per_m = {}",
        format_number(ivg_i)
    );
    println!(
        "delta_k0_rad_per_m = {}",
        format_number(spectrum.phase.delta_k(0.0))
    );
    println!("fwhm_nm = {}", format_number(spectrum.fwhm_nm));

    let mut table = CsvTable::new(&["lambda_signal_nm", "re_phi", "im_phi", "jsi"]);
    for row in spectrum.jsa.rows() {
        table.push_numbers(&row);
    }
    save(&table, out, "jsa.csv")?;
    let mut disp = CsvTable::new(&[
        "mode",
        "lambda_nm",
        "n_eff",
        "beta_per_m",
        "inverse_group_velocity_ns_per_m",
    ]);
    for (label, t) in [
        ("signal", spectrum.phase.signal()),
        ("idler", spectrum.phase.idler()),
    ] {
        for r in t.rows() {
            disp.push(&[
                label.into(),
                r[0].into(),
                r[1].into(),
                r[2].into(),
                r[3].into(),
            ]);
        }
    }
    save(&disp, out, "dispersion.csv")
}

pub fn channels(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sim = Simulation::new(cfg.clone())?;
    let spectrum = sim.spectrum()?;
    let (_, rate) = sim.rate(&spectrum)?;
    let report = sim.channels(&spectrum, Some(&rate))?;
    let mut table = CsvTable::new(&[
        "n",
        "lambda_upper_nm",
        "lambda_lower_nm",
        "alpha",
        "beta",
        "gamma_re",
        "gamma_im",
        "concurrence",
        "pair_rate_per_s_per_mw",
    ]);
    for (n, v) in report.csv_rows() {
        let mut cells: Vec<Cell> = vec![n.into()];
        cells.extend(v.iter().map(|&x| Cell::Num(x)));
        table.push(&cells);
    }
    save(&table, out, "channels.csv")?;
    println!("channels = {}", report.rows.len());
    for &c in &cfg.channels.thresholds {
        let counts = report.channels_above(c);
        println!(
            "concurrence > {c}: {} contiguous, {} total",
            counts.contiguous, counts.total
        );
    }
    Ok(())
}

pub fn rate(cfg: &RunConfig, out: &Path) -> Result<()> {
    let sim = Simulation::new(cfg.clone())?;
    let spectrum = sim.spectrum()?;
    let (_, r) = sim.rate(&spectrum)?;
    let quantities = [
        ("pump_nm", spectrum.pump_um * 1e3),
        ("rate_per_s_per_mw", r.rate_per_mw),
        ("sigma", r.sigma),
        ("gamma_overlap_per_m", r.overlap.gamma_per_m),
        ("a_eff_um2", r.overlap.a_eff_um2),
        ("fiber_coupling_signal", r.fiber_signal),
        ("fiber_coupling_idler", r.fiber_idler),
        ("pump_flux_per_s_per_mw", r.pump_flux_per_mw),
        ("jsi_integral_rad_per_s", r.integrated_intensity),
        ("brightness_per_s_per_mw_per_hz", r.brightness),
    ];
    let mut table = CsvTable::new(&["quantity", "value"]);
    for (name, v) in quantities {
        println!("{name} = {}", format_number(v));
        table.push(&[name.into(), v.into()]);
    }
    save(&table, out, "rate.csv")
}

fn write_trace(result: &GaResult, out: &Path) -> Result<()> {
    let mut table = CsvTable::new(&["generation", "best_fitness", "mean_fitness"]);
    for r in &result.trace {
        table.push(&[
            r.generation.into(),
            r.best_fitness.into(),
            r.mean_fitness.into(),
        ]);
    }
    save(&table, out, "convergence.csv")
}

pub fn optimize(cfg: &RunConfig, out: &Path) -> Result<()> {
    let settings = GaSettings::from(&cfg.optimizer);
    if cfg.optimizer.sphere_benchmark {
        let sphere = Sphere::de_jong();
        let result = run_ga(&sphere, &settings)?;
        write_trace(&result, out)?;
        println!("best_fitness = {}", format_number(result.best_fitness));
        for (k, g) in result.best_genes.iter().enumerate() {
            println!("x{k} = {}", format_number(*g));
        }
        return Ok(());
    }

    let objective = BrwObjective::new(cfg)?;
    let result = run_ga(&objective, &settings)?;
    write_trace(&result, out)?;
    let fitness = objective.fitness(&result.best_genes)?;
    println!("best_fitness = {}", format_number(result.best_fitness));
    println!(
        "delta_k0_rad_per_m = {}",
        format_number(fitness.phase_residual)
    );
    println!(
        "group_velocity_mismatch_ns_per_m = {}",
        format_number(fitness.gvm)
    );
    for (name, g) in GENE_NAMES.iter().zip(&result.best_genes) {
        println!("{name} = {}", format_number(*g));
    }

    let design = objective.design_config(&result.best_genes);
    match Simulation::new(design.clone()).and_then(|s| s.spectrum_at(objective.pump_um())) {
        Ok(s) => println!("fwhm_nm = {}", format_number(s.fwhm_nm)),
        Err(e) => log::warn!("best design has no spectrum: {e}"),
    }
    fs::create_dir_all(out)?;
    let path = out.join("best_design.toml");
    fs::write(&path, design.to_toml_string()?)?;
    log::info!("wrote {}", path.display());
    Ok(())
}

pub fn sensitivity(cfg: &RunConfig, out: &Path) -> Result<()> {
    let parameter = StackParameter::parse(&cfg.sensitivity.parameter)?;
    let sim = Simulation::new(cfg.clone())?;
    let rows = sensitivity_scan(&sim, parameter, &cfg.sensitivity.deltas)?;
    let mut table = CsvTable::new(&[
        "delta",
        parameter.name(),
        "pump_nm",
        "center_nm",
        "center_shift_nm",
        "fwhm_nm",
        "delta_k0_rad_per_m",
        "channels_above_threshold",
    ]);
    println!(
        "{:>8} {:>14} {:>12} {:>12} {:>10} {:>9}",
        "delta",
        parameter.name(),
        "pump_nm",
        "shift_nm",
        "fwhm_nm",
        "channels"
    );
    for r in &rows {
        println!(
            "{:>8.4} {:>14.6} {:>12.4} {:>12.4} {:>10.3} {:>9}",
            r.delta, r.value, r.pump_nm, r.center_shift_nm, r.fwhm_nm, r.channels_above
        );
        table.push(&[
            r.delta.into(),
            r.value.into(),
            r.pump_nm.into(),
            r.center_nm.into(),
            r.center_shift_nm.into(),
            r.fwhm_nm.into(),
            r.delta_k0.into(),
            r.channels_above.into(),
        ]);
    }
    save(&table, out, "sensitivity.csv")
}
