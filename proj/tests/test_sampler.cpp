#include <doctest.h>

#include <cmath>
#include <string>

#include "sugam/sampler.hpp"
#include "sugam/synthetic.hpp"
#include "test_helpers.hpp"

using namespace sugam;

namespace {

// intercept-only design over n slope units, npos of them positive
std::pair<DesignMatrix, IndexVector> intercept_only(Index n, Index npos) {
  SlopeUnitTable t;
  t.su_ids.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) t.su_ids[static_cast<std::size_t>(i)] = int(i) + 1;
  t.labels = IndexVector::Zero(n);
  for (Index i = 0; i < npos; ++i) t.labels[i] = 1;
  t.data.resize(n, 0);
  ModelSpec spec;  // no terms at all
  return {build_design(t, spec), t.labels};
}

}  // namespace

TEST_CASE("sampler matches the quadrature oracle on an unbalanced intercept") {
  const auto [design, labels] = intercept_only(200, 60);
  const OracleResult oracle = quadrature_oracle(design, labels);
  // logit(0.3) is -0.847; the vague prior barely moves it
  CHECK(oracle.mean[0] == doctest::Approx(std::log(0.3 / 0.7)).epsilon(0.02));

  SamplerOptions opts;
  opts.samples = 2000;
  opts.chains = 2;
  opts.thin = 5;
  opts.seed = 77;
  const SampleResult res = sample_posterior(design, labels, opts);
  REQUIRE(res.samples.draws.rows() == 2000);
  REQUIRE(res.samples.draws.cols() == 1);
  const MarginalSummary s = summarize_marginals(res.samples);
  CHECK(std::abs(s.mean[0] - oracle.mean[0]) < 0.05 * std::abs(oracle.mean[0]));
  CHECK(std::abs(s.sd[0] - oracle.sd[0]) < 0.05 * oracle.sd[0]);
}

TEST_CASE("balanced labels give a posterior centered at zero") {
  const auto [design, labels] = intercept_only(400, 200);
  SamplerOptions opts;
  opts.samples = 1500;
  opts.seed = 3;
  const SampleResult res = sample_posterior(design, labels, opts);
  const MarginalSummary s = summarize_marginals(res.samples);
  CHECK(std::abs(s.mean[0]) < 0.05);
  CHECK(classify_significance(res.samples, "intercept") ==
        Significance::kNotSignificant);
}

TEST_CASE("same seed reproduces draws bitwise, different seed does not") {
  const SynthData synth = synth_table(150, 21);
  SamplerOptions opts;
  opts.samples = 200;
  opts.chains = 2;
  opts.thin = 2;
  opts.seed = 5;
  const SampleResult a = sample_posterior(synth.design, synth.table.labels, opts);
  const SampleResult b = sample_posterior(synth.design, synth.table.labels, opts);
  CHECK(bit_equal(a.samples.draws, b.samples.draws));
  opts.seed = 6;
  const SampleResult c = sample_posterior(synth.design, synth.table.labels, opts);
  CHECK_FALSE(bit_equal(a.samples.draws, c.samples.draws));
}

TEST_CASE("thread count does not change the draws") {
  const SynthData synth = synth_table(120, 22);
  SamplerOptions opts;
  opts.samples = 200;
  opts.chains = 3;
  opts.thin = 2;
  opts.seed = 9;
  opts.threads = 1;
  const SampleResult serial = sample_posterior(synth.design, synth.table.labels, opts);
  opts.threads = 3;
  const SampleResult parallel = sample_posterior(synth.design, synth.table.labels, opts);
  CHECK(bit_equal(serial.samples.draws, parallel.samples.draws));
}

TEST_CASE("posterior csv round-trips bitwise") {
  const SynthData synth = synth_table(100, 23);
  SamplerOptions opts;
  opts.samples = 50;
  opts.seed = 4;
  const SampleResult res = sample_posterior(synth.design, synth.table.labels, opts);
  const std::string csv = serialize_posterior_csv(res.samples);
  const PosteriorSamples back = parse_posterior_csv(csv, "p");
  CHECK(back.names == res.samples.names);
  CHECK(bit_equal(back.draws, res.samples.draws));
  CHECK(serialize_posterior_csv(back) == csv);
}

TEST_CASE("rw1 draws satisfy the sum-to-zero constraint") {
  const SynthData synth = synth_table(250, 24);
  SamplerOptions opts;
  opts.samples = 300;
  opts.chains = 2;
  opts.thin = 3;
  opts.seed = 12;
  const SampleResult res = sample_posterior(synth.design, synth.table.labels, opts);
  const ParameterLayout layout = layout_of(synth.design);
  for (const auto& block : layout.rw1_blocks) {
    for (Index s = 0; s < res.samples.draws.rows(); ++s) {
      const double sum =
          res.samples.draws.row(s).segment(block.start, block.size).sum();
      REQUIRE(std::abs(sum) < 1e-8);
    }
  }
}

TEST_CASE("diagnostics serialize with per-parameter maps") {
  const SynthData synth = synth_table(80, 25);
  SamplerOptions opts;
  opts.samples = 100;
  opts.seed = 2;
  const SampleResult res = sample_posterior(synth.design, synth.table.labels, opts);
  const std::string json = serialize_diagnostics(res.diagnostics);
  CHECK(json.find("\"ess\"") != std::string::npos);
  CHECK(json.find("\"split_rhat\"") != std::string::npos);
  CHECK(json.find("\"acceptance\"") != std::string::npos);
  CHECK(json.find("intercept") != std::string::npos);
  CHECK(res.diagnostics.ess.size() == static_cast<Index>(res.samples.names.size()));
}

TEST_CASE("oracle refuses random terms and too many parameters") {
  const SynthData synth = synth_table(60, 26);
  CHECK_THROWS_AS(quadrature_oracle(synth.design, synth.table.labels), InternalError);
}
