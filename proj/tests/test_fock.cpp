#include <doctest.h>

#include "oracles.hpp"
#include "toda_crystal/fock.hpp"

using namespace toda_crystal;

namespace {

SectorConfig cfg(int s, int n, Scalar p = Scalar(1, 2)) { return {s, n, p, 0}; }

// Closed-form potential, summed directly from its defining display.
Scalar phi_closed(int k, const Partition& mu, int s, const Scalar& p) {
  Scalar total = 0;
  for (std::size_t i = 1; i <= mu.length(); ++i) {
    const long ii = static_cast<long>(i);
    total += qpow(p, 2L * k * (s + mu.part(i) - ii + 1)) - qpow(p, 2L * k * (s - ii + 1));
  }
  const Scalar qk = qpow(p, 2L * k);
  return total + qk * (1 - qpow(p, 2L * k * s)) / (1 - qk);
}

}  // namespace

TEST_CASE("basis sizes") {
  CHECK(basis(cfg(0, 0)).size() == 1);
  CHECK(basis(cfg(0, 2)).size() == 4);
  const auto counts = oracle::partition_counts(5);
  long total = 0;
  for (long c : counts) total += c;
  CHECK(static_cast<long>(basis(cfg(3, 5)).size()) == total);
  CHECK(total == 19);  // 1 + 1 + 2 + 3 + 5 + 7
}

TEST_CASE("bilinear action on Maya diagrams") {
  const FockState vac{0, Partition{}};
  auto r = apply_bilinear(-1, 0, vac, false);
  CHECK(r.coefficient == 1);
  CHECK(r.state.shape == Partition{1});

  // psi*_1 finds level 1 empty; psi_{1} would fill level -1, already full.
  CHECK(apply_bilinear(-2, 1, vac, false).coefficient == 0);
  CHECK(apply_bilinear(1, 0, vac, false).coefficient == 0);

  // Overflow is flagged rather than dropped.
  auto big = apply_bilinear(-3, 0, vac, false, 2);
  CHECK(big.coefficient == 1);
  CHECK(big.overflow);

  // Crossing parity: moving level 0 of |(1),0> (levels 1,-1,-2,...) to 2
  // crosses the occupied level 1.
  const FockState one{0, Partition{1}};
  auto cross = apply_bilinear(-2, 0, one, false);
  CHECK(cross.coefficient == 0);  // level 0 is empty in |(1),0>
  auto cross2 = apply_bilinear(-2, -1, one, false);
  CHECK(cross2.coefficient == -1);
  CHECK(cross2.state.shape == Partition({2, 2}));
}

TEST_CASE("L0 diagonal on the vacuum") {
  for (int s = -3; s <= 3; ++s) {
    const FockState vac{s, Partition{}};
    long sum = 0;
    for (long n = -10; n <= 10; ++n) sum += n * apply_bilinear(-n, n, vac, true).coefficient;
    CHECK(sum == s * (s + 1) / 2);
    CHECK(l0_eigenvalue(vac) == s * (s + 1) / 2);
  }
}

TEST_CASE("convention lock-in: L0, W0, H_k diagonals match closed forms") {
  const Scalar p(1, 2);
  for (int s = -2; s <= 2; ++s) {
    const auto c = cfg(s, 8, p);
    const auto L0 = diag_op(DiagKind::kL0, c);
    const auto W0 = diag_op(DiagKind::kW0, c);
    const auto& b = L0.basis();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto& mu = b.shape(i);
      CHECK(L0.entry(i, i) == mu.weight() + s * (s + 1) / 2);
      CHECK(W0.entry(i, i) ==
            mu.kappa() + (2 * s + 1) * mu.weight() + s * (s + 1) * (2 * s + 1) / 6);
    }
    for (int k : {-3, -2, -1, 1, 2, 3}) {
      const auto H = v_op(k, 0, c);
      for (std::size_t i = 0; i < b.size(); ++i)
        CHECK(H.entry(i, i) == phi_closed(k, b.shape(i), s, p));
    }
  }
}

TEST_CASE("v_op examples") {
  const auto c = cfg(0, 4);
  const auto J1 = v_op(0, 1, c);
  const auto& b = J1.basis();
  const auto one = *b.index_of(Partition{1});
  const auto empty = *b.index_of(Partition{});
  CHECK(abs(J1.entry(empty, one)) == 1);

  const auto H1 = v_op(1, 0, c);
  CHECK(H1.entry(one, one) == Scalar(-3, 4));

  CHECK(J1.shift_class() == ShiftClass::kBanded);
  CHECK(*J1.band() == -1);
  CHECK_THROWS_AS(v_op(1, 5, c), std::invalid_argument);

  // J_k lowers energy by k and annihilates the vacuum.
  for (int k = 1; k <= 4; ++k) {
    const auto Jk = current_op(k, c);
    CHECK(*Jk.band() == -k);
    for (std::size_t i = 0; i < Jk.dim(); ++i) CHECK(Jk.entry(i, empty) == 0);
    for (std::size_t r = 0; r < Jk.dim(); ++r)
      for (const auto& [col, v] : Jk.row(r)) CHECK(b.energy(r) == b.energy(col) - k);
  }
}

TEST_CASE("diag_op examples") {
  const auto c = cfg(0, 3);
  const auto L0 = diag_op(DiagKind::kL0, c);
  const auto W0 = diag_op(DiagKind::kW0, c);
  CHECK(L0.entry(0, 0) == 0);
  const auto one = *L0.basis().index_of(Partition{1});
  CHECK(W0.entry(one, one) == 1);
  for (int s = -3; s <= 3; ++s) {
    const auto W = diag_op(DiagKind::kW0, cfg(s, 0));
    CHECK(W.entry(0, 0) == s * (s + 1) * (2 * s + 1) / 6);
  }
  const auto pw = diag_op(DiagKind::kPW0Power, cfg(1, 2), -1);
  CHECK(pw.entry(0, 0) == 2);  // p^{-1} with W_0 = 1 on |1>

  const SeriesContext ctx{1, 0, 2};
  const auto ql0 = q_l0_diagonal(cfg(1, 2), ctx);
  CHECK(ql0.entries[0].coefficient({1, 0, 0}) == 1);
  CHECK(!ql0.dropped[0]);
  CHECK(ql0.dropped[2]);  // |(2),1> has L_0 = 3 > NQ
}

TEST_CASE("vertex operators") {
  const auto c = cfg(0, 5);
  std::vector<Scalar> zeros(5, 0);
  const auto id = vertex_op(zeros, VertexDirection::kRaising, c);
  for (std::size_t i = 0; i < id.dim(); ++i) {
    CHECK(id.entry(i, i) == 1);
    CHECK(id.row(i).size() == 1);
  }
  CHECK_THROWS_AS(vertex_op(std::vector<Scalar>(2, 1), VertexDirection::kRaising, c),
                  std::invalid_argument);
}

TEST_CASE("transfer operators expand into principal specializations") {
  for (const Scalar p : {Scalar(1, 2), Scalar(3, 5)}) {
    for (int s = -1; s <= 1; ++s) {
      const auto c = cfg(s, 8, p);
      const auto T = transfer_operators(c);
      const auto& b = T.g_plus.basis();
      for (std::size_t i = 0; i < b.size(); ++i) {
        const auto& mu = b.shape(i);
        CHECK(T.g_plus.entry(0, i) == oracle::schur_qrho(mu.parts(), p));
        CHECK(T.gp_minus.entry(i, 0) == oracle::schur_qrho(mu.conjugate().parts(), p));
        CHECK(T.g_minus.entry(i, 0) == oracle::schur_qrho(mu.parts(), p));
      }
      CHECK(T.g_plus.shift_class() == ShiftClass::kLowering);
      CHECK(T.g_minus.shift_class() == ShiftClass::kRaising);
    }
  }
}

TEST_CASE("op_product certificates") {
  const auto c = cfg(0, 5);
  const auto T = transfer_operators(c);
  const auto id = SectorOperator::identity(T.g_plus.basis_ptr(), c);

  std::vector<SectorOperator> f1{T.g_minus, id};
  auto r1 = op_product(f1);
  for (std::size_t i = 0; i < id.dim(); ++i)
    for (std::size_t j = 0; j < id.dim(); ++j) {
      CHECK(r1.op.entry(i, j) == T.g_minus.entry(i, j));
      CHECK(r1.op.certified(i, j));
    }

  std::vector<SectorOperator> f2{T.g_minus, T.g_plus};
  auto r2 = op_product(f2);
  CHECK(r2.op.shift_class() == ShiftClass::kMixed);
  std::vector<SectorOperator> f3{T.g_plus, T.g_minus};
  auto r3 = op_product(f3);
  const auto& b = id.basis();
  for (std::size_t i = 0; i < id.dim(); ++i)
    for (std::size_t j = 0; j < id.dim(); ++j) {
      CHECK(r2.certificate.certifies(b.energy(i), b.energy(j)) ==
            (std::max(b.energy(i), b.energy(j)) <= c.cutoff));
      CHECK_FALSE(r3.certificate.certifies(b.energy(i), b.energy(j)));
    }

  const auto other = SectorOperator::identity(make_basis(cfg(1, 5)), cfg(1, 5));
  std::vector<SectorOperator> bad{id, other};
  CHECK_THROWS_AS(op_product(bad), std::invalid_argument);
  CHECK_THROWS_AS(op_product(std::span<const SectorOperator>{}), std::invalid_argument);
}

TEST_CASE("Heisenberg commutator is central on the certified window") {
  const auto c = cfg(0, 6);
  const int sigma = central_sign(c);
  CHECK((sigma == 1 || sigma == -1));
  for (int m = 1; m <= 3; ++m) {
    const auto comm = commutator(current_op(m, c), current_op(-m, c));
    std::size_t checked = 0;
    for (std::size_t i = 0; i < comm.dim(); ++i)
      for (std::size_t j = 0; j < comm.dim(); ++j) {
        if (!comm.certified(i, j)) continue;
        ++checked;
        CHECK(comm.entry(i, j) == (i == j ? Scalar(sigma * m) : Scalar(0)));
      }
    CHECK(checked > 0);
  }
}

TEST_CASE("certified entries are stable under a larger cutoff") {
  const int n = 6;
  const auto small = transfer_operators(cfg(1, n));
  const auto large = transfer_operators(cfg(1, n + 2));
  const auto gg_small = small.g_minus * small.g_plus;
  const auto gg_large = large.g_minus * large.g_plus;
  const auto& bs = gg_small.basis();
  const auto& bl = gg_large.basis();
  for (std::size_t i = 0; i < bs.size(); ++i)
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (!gg_small.certified(i, j)) continue;
      const auto li = *bl.index_of(bs.shape(i));
      const auto lj = *bl.index_of(bs.shape(j));
      CHECK(gg_large.certified(li, lj));
      CHECK(gg_small.entry(i, j) == gg_large.entry(li, lj));
    }
}

TEST_CASE("operator dump") {
  const auto J1 = current_op(1, cfg(0, 1));
  const auto j = J1.dump();
  REQUIRE(j.size() == 1);
  CHECK(j[0]["row"] == nlohmann::json::array());
  CHECK(j[0]["col"] == nlohmann::json::array({1}));
  CHECK(j[0]["val"] == "1");
  CHECK(j[0]["certified"] == true);
}
