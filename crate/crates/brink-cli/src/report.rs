//! Orchestrates one run: parse, optionally center, diagnose, sample, and
//! emit report.json plus plot-data CSVs. All numbers in report.json carry
//! 17 significant digits, so a re-read recovers every double exactly; the
//! CSV files use the shortest round-trip decimal form.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use brink_core::{
    boundary_diagnostic, center_covariates, cholesky, contour_points, model_moments, sample_mles,
    sample_suffstats, skewness, suffstat_polytope_2d, DiagnosticStatus, EdgeworthExpansion,
    MleSample, ModelMoments, RngStream, SuffStatSample,
};

use crate::config::RunConfig;
use crate::input::parse_csv;
use crate::CliError;

/// Points on the confidence contour written to contour.csv.
const CONTOUR_POINTS: usize = 256;

/// Closest boundary edge to the fitted mean, in sufficient-statistic
/// coordinates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosestFace {
    /// vertex indices into polytope.csv (without the closing row)
    pub edge: [usize; 2],
    pub closest: [f64; 2],
    pub dist_sq: f64,
}

/// Monte-Carlo summary of the refitting study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SamplingSummary {
    pub boundary_count: usize,
    pub interior_count: usize,
    pub nonconvergent: usize,
    pub boundary_hit_rate: f64,
    /// sample skewness of the interior intercept estimates; null when
    /// fewer than 3 interior fits or the sample is degenerate
    pub skewness_alpha: Option<f64>,
    /// sample skewness of the interior slope estimates
    pub skewness_beta: Option<f64>,
}

/// The full report.json payload. Fields that only exist for one status
/// are optional and serialized as null for the other, so the schema is
/// identical across runs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub input_path: String,
    pub response_column: String,
    pub covariate_columns: Vec<String>,
    pub n: usize,
    pub level: f64,
    pub reps: usize,
    pub seed: u64,
    pub centered: bool,
    /// per design column offsets subtracted before fitting (0 for the
    /// intercept); all downstream coordinates are in the shifted frame
    pub centering_offsets: Vec<f64>,
    /// "evaluated" or "separated"
    pub status: String,
    pub recession: Option<Vec<f64>>,
    pub beta_hat: Option<Vec<f64>>,
    pub mu_hat: Option<Vec<f64>>,
    pub dist_sq: Option<f64>,
    pub threshold: Option<f64>,
    pub verdict: Option<String>,
    pub boundary_contact: Option<bool>,
    pub closest_face: Option<ClosestFace>,
    pub sampling: Option<SamplingSummary>,
}

/// Pretty JSON with every f64 printed as `{:.16e}`: 17 significant
/// digits, enough to reproduce the exact bits on re-parse.
struct SigFigFormatter {
    pretty: PrettyFormatter<'static>,
}

impl SigFigFormatter {
    fn new() -> Self {
        SigFigFormatter {
            pretty: PrettyFormatter::new(),
        }
    }
}

impl Formatter for SigFigFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_array(writer)
    }

    fn end_array<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_array(writer)
    }

    fn begin_array_value<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_array_value(writer, first)
    }

    fn end_array_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_array_value(writer)
    }

    fn begin_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object(writer)
    }

    fn end_object<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_object(writer)
    }

    fn begin_object_key<W>(&mut self, writer: &mut W, first: bool) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object_key(writer, first)
    }

    fn begin_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.begin_object_value(writer)
    }

    fn end_object_value<W>(&mut self, writer: &mut W) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        self.pretty.end_object_value(writer)
    }
}

/// Serializes the report with 17-significant-digit floats and a trailing
/// newline.
pub fn report_json(report: &Report) -> String {
    let mut buf = Vec::with_capacity(4096);
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter::new());
    report
        .serialize(&mut ser)
        .expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits utf-8")
}

/// x,y rows for a closed polygon: the first point is repeated at the end
/// so plotting tools draw the closing segment.
fn polygon_csv(points: &[[f64; 2]]) -> String {
    let mut s = String::from("x,y\n");
    for p in points.iter().chain(points.first()) {
        s.push_str(&format!("{},{}\n", p[0], p[1]));
    }
    s
}

fn suffstat_samples_csv(sample: &SuffStatSample) -> String {
    let mut s = String::from("x,y,on_boundary\n");
    for (draw, &on_boundary) in sample.draws.iter().zip(&sample.on_boundary) {
        s.push_str(&format!(
            "{},{},{}\n",
            draw[0],
            draw[1],
            u8::from(on_boundary)
        ));
    }
    s
}

fn mle_samples_csv(sample: &MleSample) -> String {
    let mut s = String::from("alpha,beta\n");
    for est in &sample.interior_estimates {
        s.push_str(&format!("{},{}\n", est[0], est[1]));
    }
    s
}

/// Density values on a regular grid centered at the model mean, spanning
/// `half_width` marginal standard deviations per axis.
fn edgeworth_grid_csv(
    moments: &ModelMoments,
    resolution: usize,
    half_width: f64,
) -> Result<String, CliError> {
    let expansion = EdgeworthExpansion::new(moments)?;
    let steps = (resolution - 1) as f64;
    let half = [
        half_width * moments.sigma.get(0, 0).sqrt(),
        half_width * moments.sigma.get(1, 1).sqrt(),
    ];
    let mut s = String::from("x,y,density\n");
    for i in 0..resolution {
        let x = moments.mu[0] - half[0] + 2.0 * half[0] * i as f64 / steps;
        for j in 0..resolution {
            let y = moments.mu[1] - half[1] + 2.0 * half[1] * j as f64 / steps;
            s.push_str(&format!("{},{},{}\n", x, y, expansion.density(&[x, y])));
        }
    }
    Ok(s)
}

fn summarize_mles(sample: &MleSample) -> SamplingSummary {
    let interior = &sample.interior_estimates;
    let column = |k: usize| interior.iter().map(|b| b[k]).collect::<Vec<f64>>();
    let (skewness_alpha, skewness_beta) = if interior.len() >= 3 {
        (skewness(&column(0)).ok(), skewness(&column(1)).ok())
    } else {
        (None, None)
    };
    SamplingSummary {
        boundary_count: sample.boundary_count,
        interior_count: interior.len(),
        nonconvergent: sample.nonconvergent,
        boundary_hit_rate: sample.boundary_count as f64 / sample.total as f64,
        skewness_alpha,
        skewness_beta,
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::WriteOutput {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs the whole pipeline and writes the output files. Computation
/// happens first; all writes follow, report.json last so its presence
/// marks a complete output set. Returns the report for the caller.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let raw = parse_csv(
        &config.input_path,
        &config.response_column,
        &config.covariate_columns,
    )?;
    let (data, offsets) = if config.center {
        center_covariates(&raw)?
    } else {
        let cols = raw.d();
        (raw, vec![0.0; cols])
    };

    let diag = boundary_diagnostic(&data, config.level)?;
    let polytope = suffstat_polytope_2d(data.design())?;

    let mut report = Report {
        schema_version: 1,
        input_path: config.input_path.to_string_lossy().into_owned(),
        response_column: config.response_column.clone(),
        covariate_columns: config.covariate_columns.clone(),
        n: data.n(),
        level: config.level,
        reps: config.reps,
        seed: config.seed,
        centered: config.center,
        centering_offsets: offsets,
        status: String::new(),
        recession: None,
        beta_hat: None,
        mu_hat: None,
        dist_sq: None,
        threshold: None,
        verdict: None,
        boundary_contact: None,
        closest_face: None,
        sampling: None,
    };

    let out = &config.output_dir;
    let mut files: Vec<(PathBuf, String)> =
        vec![(out.join("polytope.csv"), polygon_csv(polytope.vertices()))];

    match diag.status {
        DiagnosticStatus::Separated { recession } => {
            report.status = "separated".into();
            report.recession = Some(recession);
        }
        DiagnosticStatus::Evaluated(eval) => {
            report.status = "evaluated".into();
            let moments = model_moments(data.design(), &eval.beta_hat);

            let metric = cholesky(&moments.sigma)?.inverse();
            let contour = contour_points(
                [moments.mu[0], moments.mu[1]],
                &metric,
                eval.threshold,
                CONTOUR_POINTS,
            )?;
            files.push((out.join("contour.csv"), polygon_csv(&contour)));
            files.push((
                out.join("edgeworth_grid.csv"),
                edgeworth_grid_csv(&moments, config.grid_resolution, config.grid_half_width)?,
            ));

            if config.reps > 0 {
                let design = data.design();
                let stats = sample_suffstats(
                    design,
                    &eval.beta_hat,
                    config.reps,
                    RngStream::new(config.seed, 0),
                );
                // same stream id: replicate r of both studies sees the
                // same responses, so the clouds are paired
                let mles = sample_mles(
                    design,
                    &eval.beta_hat,
                    config.reps,
                    RngStream::new(config.seed, 0),
                );
                files.push((
                    out.join("suffstat_samples.csv"),
                    suffstat_samples_csv(&stats),
                ));
                files.push((out.join("mle_samples.csv"), mle_samples_csv(&mles)));
                report.sampling = Some(summarize_mles(&mles));
            }

            report.beta_hat = Some(eval.beta_hat);
            report.mu_hat = Some(moments.mu);
            report.dist_sq = Some(eval.dist_sq);
            report.threshold = Some(eval.threshold);
            report.verdict = Some(eval.verdict.as_str().to_string());
            report.boundary_contact = Some(eval.boundary_contact);
            report.closest_face = eval.closest_face.map(|bd| ClosestFace {
                edge: [bd.edge.0, bd.edge.1],
                closest: bd.closest,
                dist_sq: bd.dist_sq,
            });
        }
    }

    files.push((out.join("report.json"), report_json(&report)));

    fs::create_dir_all(out).map_err(|source| CliError::WriteOutput {
        path: out.clone(),
        source,
    })?;
    for (path, contents) in &files {
        write_file(path, contents)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_report() -> Report {
        Report {
            schema_version: 1,
            input_path: "data.csv".into(),
            response_column: "y".into(),
            covariate_columns: vec!["x".into()],
            n: 4,
            level: 0.99,
            reps: 0,
            seed: 0,
            centered: true,
            centering_offsets: vec![0.0, 0.1 + 0.2],
            status: "evaluated".into(),
            recession: None,
            beta_hat: Some(vec![1.0 / 3.0, -2.5e-17]),
            mu_hat: Some(vec![2.0, 1.0000000000000002]),
            dist_sq: Some(9.87654321e-3),
            threshold: Some(9.21034037197618),
            verdict: Some("SAFE".into()),
            boundary_contact: Some(false),
            closest_face: Some(ClosestFace {
                edge: [3, 4],
                closest: [1.5, -0.25],
                dist_sq: 1e-300,
            }),
            sampling: None,
        }
    }

    #[test]
    fn json_round_trips_every_float_bit_for_bit() {
        let report = tiny_report();
        let text = report_json(&report);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back.beta_hat, report.beta_hat);
        assert_eq!(back.mu_hat, report.mu_hat);
        assert_eq!(back.dist_sq, report.dist_sq);
        assert_eq!(back.threshold, report.threshold);
        assert_eq!(back.centering_offsets, report.centering_offsets);
        let face = back.closest_face.unwrap();
        assert_eq!(face.dist_sq, 1e-300);
        assert_eq!(face.closest, [1.5, -0.25]);
    }

    #[test]
    fn json_floats_carry_seventeen_significant_digits() {
        let text = report_json(&tiny_report());
        assert!(text.contains("3.3333333333333331e-1"), "got:\n{text}");
        assert!(text.contains("9.2103403719761801e0"), "got:\n{text}");
    }

    #[test]
    fn integers_stay_plain_in_json() {
        let text = report_json(&tiny_report());
        assert!(text.contains("\"schema_version\": 1"));
        assert!(text.contains("\"n\": 4"));
        assert!(text.contains("\"seed\": 0"));
    }

    #[test]
    fn polygon_csv_repeats_the_first_point() {
        let csv = polygon_csv(&[[0.0, 0.0], [1.0, 0.0], [0.5, 2.0]]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[1], lines[4]);
    }
}
