// Writes the golden series under fixtures/. tau' is produced from the
// partition sum for Z' (prefactor divided out, signs substituted back), so
// it never touches the operator route it is later compared against.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "toda_crystal/fock.hpp"
#include "toda_crystal/models.hpp"

using namespace toda_crystal;

namespace {

nlohmann::ordered_json document(const ModelParams& params, const TruncatedSeries& f) {
  nlohmann::ordered_json j;
  j["params"] = params.to_json();
  const auto& ctx = f.context();
  j["context"] = {{"K", ctx.K}, {"D", ctx.D}, {"NQ", ctx.NQ}};
  j["series"] = to_json(f);
  return j;
}

void write(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  std::cout << "wrote " << path.string() << '\n';
}

TruncatedSeries tau_from_partitions(const ModelParams& params) {
  const SeriesContext ctx = params.series_context();
  const int sigma = central_sign(params.sector());
  TruncatedSeries lin(ctx);
  std::vector<TruncatedSeries> ti, thi;
  for (int k = 1; k <= ctx.K; ++k) {
    const Scalar qk = qpow(params.p, 2L * k);
    lin += TruncatedSeries::variable(ctx, Variable::t(k), qk / (1 - qk));
    lin += TruncatedSeries::variable(ctx, Variable::t_hat(k), Scalar(-sigma) / (1 - qk));
    ti.push_back(TruncatedSeries::variable(ctx, Variable::t(k), k % 2 ? -1 : 1));
    thi.push_back(TruncatedSeries::variable(ctx, Variable::t_hat(k), -1));
  }
  const TruncatedSeries stripped = series_exp(-lin) * zprime_series(params);
  return substitute(stripped, ti, thi);
}

}  // namespace

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);
  const Scalar p(1, 2);

  const auto zp = ModelParams::make(0, 0, p, SeriesContext{2, 2, 4});
  write(dir / "zprime_p1of2_l0.json", document(zp, zprime_series(zp)));

  for (int s = -1; s <= 1; ++s) {
    const auto tp = ModelParams::make(s, 0, p, SeriesContext{2, 2, 2});
    const std::string name = "tau_prime_s" + std::string(s < 0 ? "m" : "") +
                             std::to_string(std::abs(s)) + "_l0_p1of2.json";
    write(dir / name, document(tp, tau_from_partitions(tp)));
  }
  return 0;
}
