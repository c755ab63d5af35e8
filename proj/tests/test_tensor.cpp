#include "qsr2/catalog.hpp"
#include "qsr2/tensor.hpp"
#include "util.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qsr2;
using Catch::Matchers::WithinAbs;

namespace {

MultipartiteOperator random_gate(const std::vector<int>& dims, std::mt19937_64& rng) {
    long D = 1;
    for (int d : dims) D *= d;
    std::normal_distribution<double> gauss;
    Matrix m(D, D);
    for (long r = 0; r < D; ++r)
        for (long c = 0; c < D; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
    return MultipartiteOperator(dims, std::move(m));
}

// numeric rank of the corresponding state reshaped across the grouped cut
int state_rank_across(const Vector& psi, const std::vector<int>& dims, const Bipartition& cut) {
    const int n = static_cast<int>(dims.size());
    std::vector<int> grouped;
    for (int d : dims) {
        grouped.push_back(d);
        grouped.push_back(d);
    }
    long dL = 1;
    for (int p : cut.left) dL *= long(dims[p]) * dims[p];
    const long total = psi.size();
    Matrix m(dL, total / dL);
    std::vector<int> digits(2 * n);
    for (long i = 0; i < total; ++i) {
        long idx = i;
        for (int j = 2 * n - 1; j >= 0; --j) {
            digits[j] = int(idx % grouped[j]);
            idx /= grouped[j];
        }
        long l = 0, r = 0;
        for (int p : cut.left) l = l * grouped[2 * p] * grouped[2 * p + 1] +
                                   digits[2 * p] * grouped[2 * p + 1] + digits[2 * p + 1];
        for (int p : cut.right) r = r * grouped[2 * p] * grouped[2 * p + 1] +
                                    digits[2 * p] * grouped[2 * p + 1] + digits[2 * p + 1];
        m(l, r) = psi(i);
    }
    const Eigen::VectorXd sv = singular_values(m);
    int rank = 0;
    for (long i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-9 * sv(0)) ++rank;
    return rank;
}

}  // namespace

TEST_CASE("kron matches hand expansions") {
    Matrix I2 = Matrix::Identity(2, 2);
    CHECK((kron({{0, I2}, {1, I2}}).entries - Matrix::Identity(4, 4)).norm() == 0.0);

    Matrix s3 = Matrix::Zero(2, 2);
    s3(0, 0) = 1;
    s3(1, 1) = -1;
    Matrix expect = Matrix::Zero(4, 4);
    expect.diagonal() << 1, -1, -1, 1;
    CHECK((kron({{0, s3}, {1, s3}}).entries - expect).norm() == 0.0);

    // diag(1,-i) (x) diag(1,-i) (x) (i I - s3)/2 plus its conjugate partner
    // reassembles diag(-1,1,1,1,1,1,1,-1)
    Matrix dmi = Matrix::Zero(2, 2), dpi = Matrix::Zero(2, 2);
    dmi.diagonal() << 1.0, Complex(0, -1);
    dpi.diagonal() << 1.0, Complex(0, 1);
    Matrix t3a = (Complex(0, 1) * I2 - s3) / 2.0;
    Matrix t3b = (Complex(0, -1) * I2 - s3) / 2.0;
    Matrix first = kron({{0, dmi}, {1, dmi}, {2, t3a}}).entries;
    Matrix second = kron({{0, dpi}, {1, dpi}, {2, t3b}}).entries;
    CHECK_THAT((first + second - catalog_gate("example1-d").entries).norm(), WithinAbs(0, 1e-14));
}

TEST_CASE("kron rejects non-square factors") {
    Matrix rect = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(kron({{0, rect}}), DimensionError);
}

TEST_CASE("matricize ranks of named gates") {
    const Bipartition cut12 = Bipartition::of({0}, 2);
    CHECK(operator_schmidt_rank(catalog_gate("cnot"), cut12) == 2);
    CHECK(operator_schmidt_rank(catalog_gate("swap"), cut12) == 4);

    MultipartiteOperator i4({2, 2}, Matrix::Identity(4, 4));
    const Matrix m = matricize(i4, cut12);
    const Eigen::VectorXd sv = singular_values(m);
    CHECK(sv(0) > 0);
    CHECK(sv(1) < 1e-12);
    CHECK(operator_schmidt_rank(i4, cut12) == 1);

    const MultipartiteOperator ccz = catalog_gate("ccz");
    for (const auto& cut : all_bipartitions(3)) CHECK(operator_schmidt_rank(ccz, cut) == 2);
}

TEST_CASE("matricize preserves Frobenius norm") {
    std::mt19937_64 rng(11);
    for (const auto& dims : {std::vector<int>{2, 3}, {2, 2, 2}, {3, 2, 2}}) {
        const MultipartiteOperator g = random_gate(dims, rng);
        for (const auto& cut : all_bipartitions(g.parties())) {
            const Matrix m = matricize(g, cut);
            CHECK_THAT(m.norm(), WithinAbs(g.entries.norm(), 1e-12 * g.entries.norm()));
        }
    }
}

TEST_CASE("matricize rejects invalid cuts") {
    MultipartiteOperator i8({2, 2, 2}, Matrix::Identity(8, 8));
    Bipartition bad;
    bad.left = {0, 1};
    bad.right = {1, 2};
    CHECK_THROWS_AS(matricize(i8, bad), BipartitionError);
    CHECK_THROWS_AS(Bipartition::of({0, 1, 2}, 3), BipartitionError);
}

TEST_CASE("zero operator has no Schmidt rank") {
    MultipartiteOperator z({2, 2}, Matrix::Zero(4, 4));
    CHECK_THROWS_AS(operator_schmidt_rank(z, Bipartition::of({0}, 2)), DegenerateInputError);
}

TEST_CASE("product operators are rank one across every cut") {
    std::mt19937_64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<LocalOperator> ops;
        const std::vector<int> dims{2, 3, 2};
        for (int j = 0; j < 3; ++j) ops.push_back({j, testutil::random_unitary(dims[j], rng)});
        const MultipartiteOperator g = kron(ops);
        for (const auto& cut : all_bipartitions(3)) CHECK(operator_schmidt_rank(g, cut) == 1);
    }
}

TEST_CASE("schmidt rank invariant under product-unitary multiplication") {
    std::mt19937_64 rng(13);
    const MultipartiteOperator ccz = catalog_gate("ccz");
    for (int rep = 0; rep < 5; ++rep) {
        const Matrix v = testutil::random_product_unitary(ccz.dims, rng);
        const Matrix w = testutil::random_product_unitary(ccz.dims, rng);
        MultipartiteOperator g(ccz.dims, v * ccz.entries * w);
        for (const auto& cut : all_bipartitions(3)) CHECK(operator_schmidt_rank(g, cut) == 2);
    }
}

TEST_CASE("corresponding state of CNOT") {
    const Vector psi = corresponding_state(catalog_gate("cnot"));
    Vector expect = Vector::Zero(16);
    // |0000> + |0011> + |1101> + |1110>, parties grouped with their ancillas
    expect(0b0000) = 1;
    expect(0b0011) = 1;
    expect(0b1101) = 1;
    expect(0b1110) = 1;
    CHECK((psi - expect).norm() == 0.0);
}

TEST_CASE("corresponding state of single-party diagonals") {
    Matrix d = Matrix::Zero(2, 2);
    d.diagonal() << 1.0, Complex(0, 1);
    const Vector psi = corresponding_state(MultipartiteOperator({2}, d));
    Vector expect = Vector::Zero(4);
    expect(0) = 1;
    expect(3) = Complex(0, 1);
    CHECK((psi - expect).norm() == 0.0);
}

TEST_CASE("state Schmidt rank equals operator Schmidt rank") {
    std::mt19937_64 rng(14);
    for (const auto& dims : {std::vector<int>{2, 2}, {2, 3}, {2, 2, 2}, {3, 2, 2}}) {
        const MultipartiteOperator g = random_gate(dims, rng);
        const Vector psi = corresponding_state(g);
        for (const auto& cut : all_bipartitions(g.parties()))
            CHECK(state_rank_across(psi, dims, cut) == operator_schmidt_rank(g, cut));
    }
}

TEST_CASE("diag3 isomorphic state") {
    const MultipartiteOperator ccz = catalog_gate("ccz");
    Vector v = diag3_isomorphic_state(ccz);
    CHECK(v(7) == Complex(-1, 0));
    CHECK((v.head(7) - Vector::Ones(7)).norm() == 0.0);

    CHECK_THROWS_AS(diag3_isomorphic_state(catalog_gate("toffoli")), NotDiagonalError);
    CHECK_THROWS_AS(diag3_isomorphic_state(catalog_gate("cnot")), DimensionError);
}

TEST_CASE("permute parties swaps factor order") {
    std::mt19937_64 rng(15);
    const Matrix a = testutil::random_unitary(2, rng), b = testutil::random_unitary(3, rng);
    const MultipartiteOperator ab = kron({{0, a}, {1, b}});
    const MultipartiteOperator ba = permute_parties(ab, {1, 0});
    CHECK(ba.dims == std::vector<int>{3, 2});
    CHECK_THAT((ba.entries - kron({{0, b}, {1, a}}).entries).norm(), WithinAbs(0, 1e-14));
    CHECK_THROWS_AS(permute_parties(ab, {0, 0}), DimensionError);
}

TEST_CASE("unitarity checks") {
    CHECK(is_unitary(catalog_gate("toffoli")));
    MultipartiteOperator notu({2, 2}, Matrix::Ones(4, 4));
    CHECK_FALSE(is_unitary(notu));
}

TEST_CASE("factor_product recovers tensor products") {
    std::mt19937_64 rng(16);
    std::vector<Matrix> fs{testutil::random_unitary(2, rng), testutil::random_unitary(2, rng),
                           testutil::random_unitary(3, rng)};
    const Matrix x = Complex(0.3, -1.1) * kron_all(fs);
    auto fact = factor_product(x, {2, 2, 3});
    REQUIRE(fact.has_value());
    CHECK(fact->residual <= 1e-10);
    for (size_t j = 0; j < fs.size(); ++j)
        CHECK(testutil::line_distance(fact->factors[j], fs[j]) <= 1e-10);
    Matrix recon = kron_all(fact->factors) * fact->scale;
    CHECK_THAT((recon - x).norm(), WithinAbs(0, 1e-10));

    CHECK_FALSE(factor_product(catalog_gate("cnot").entries, {2, 2}).has_value());
}

TEST_CASE("all_bipartitions enumerates each cut once") {
    CHECK(all_bipartitions(2).size() == 1);
    CHECK(all_bipartitions(3).size() == 3);
    CHECK(all_bipartitions(4).size() == 7);
    for (const auto& cut : all_bipartitions(4)) CHECK(cut.left.front() == 0);
}
