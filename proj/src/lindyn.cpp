#include "vortexlab/lindyn.hpp"

#include <cmath>

#include "vortexlab/geometry.hpp"
#include "vortexlab/radial.hpp"

namespace vortexlab::lindyn {

namespace {

double p_weight(double r) { return std::exp(0.25 * r * r); }

} // namespace

ModeOperator assemble_operators(int n, double r_max, std::size_t cells) {
    const double dr = r_max / static_cast<double>(cells);
    const bool has_origin = (n == 0);
    // active nodes: 1..M-1 with Dirichlet ends; mode 0 keeps the origin cell
    const std::size_t k = has_origin ? cells : cells - 1;
    const std::size_t first = has_origin ? 0 : 1;

    ModeOperator op;
    op.n = n;
    op.r_max = r_max;
    op.nodes.resize(k);
    for (std::size_t a = 0; a < k; ++a)
        op.nodes[a] = dr * static_cast<double>(first + a);

    // finite-volume stiffness in the Gaussian weight: conductances at half
    // nodes, cell measures mu_i; mu L is symmetric by construction
    Eigen::VectorXd mu(k);
    for (std::size_t a = 0; a < k; ++a) {
        const double r = op.nodes[a];
        mu(a) = (r == 0.0) ? dr * dr / 8.0 : r * p_weight(r) * dr;
    }

    Eigen::MatrixXd Lk = Eigen::MatrixXd::Zero(k, k);
    for (std::size_t a = 0; a < k; ++a) {
        const double r = op.nodes[a];
        const double r_lo = r - 0.5 * dr, r_hi = r + 0.5 * dr;
        const double c_hi = r_hi * p_weight(r_hi) / dr;
        const double c_lo = r_lo > 0.0 ? r_lo * p_weight(r_lo) / dr : 0.0;
        double diag = -(c_hi + c_lo) / mu(a);
        if (a + 1 < k)
            Lk(a, a + 1) = c_hi / mu(a);
        if (a > 0)
            Lk(a, a - 1) = c_lo / mu(a);
        if (r > 0.0)
            diag -= n * n / (r * r);
        Lk(a, a) = diag + 1.0;
    }

    // Advection amplitude M = n (v* - g A^{-1}), with the stream operator A
    // in finite-volume form (weight r). The stream function decays only like
    // r^{-n}, so the outer row carries the Robin condition phi' = -(n/R) phi
    // via ghost elimination; the r-weighted symmetry defect this introduces
    // sits under the factor g(R) ~ 1e-22 and never reaches the weighted
    // skew-symmetry of the assembled operator.
    Eigen::MatrixXd Mk = Eigen::MatrixXd::Zero(k, k);
    if (n >= 1) {
        Eigen::VectorXd nu(k);
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k, k);
        for (std::size_t a = 0; a < k; ++a) {
            const double r = op.nodes[a];
            nu(a) = r * dr;
            if (a + 1 == k) {
                const double inv2 = 1.0 / (dr * dr);
                A(a, a - 1) = -2.0 * inv2;
                A(a, a) = 2.0 * inv2 + 2.0 * n / (r * dr) + n / (r * r) + n * n / (r * r);
                continue;
            }
            const double c_hi = (r + 0.5 * dr) / dr;
            const double c_lo = (r - 0.5 * dr) / dr;
            A(a, a + 1) = -c_hi / nu(a);
            if (a > 0)
                A(a, a - 1) = -c_lo / nu(a);
            A(a, a) = (c_hi + c_lo) / nu(a) + n * n / (r * r);
        }
        Eigen::MatrixXd a_inv = A.inverse();
        for (std::size_t a = 0; a < k; ++a) {
            const double r = op.nodes[a];
            for (std::size_t b = 0; b < k; ++b)
                Mk(a, b) = -n * radial::gauss_g(r) * a_inv(a, b);
            Mk(a, a) += n * radial::v_star(r);
        }
        if (n == 1) {
            // enforce the translation kernel r g(r) exactly: the raw
            // discretization annihilates it only to O(dr^2); the weighted
            // projection keeps the symmetry structure intact
            Eigen::VectorXd kv(k);
            for (std::size_t a = 0; a < k; ++a)
                kv(a) = op.nodes[a] * radial::gauss_g(op.nodes[a]);
            const Eigen::VectorXd dk = mu.cwiseProduct(kv);
            const Eigen::MatrixXd P =
                Eigen::MatrixXd::Identity(k, k) - kv * dk.transpose() / dk.dot(kv);
            Mk = (P * Mk * P).eval();
        }
    }

    op.L = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    op.L.topLeftCorner(k, k) = Lk;
    op.L.bottomRightCorner(k, k) = Lk;
    op.Lambda = Eigen::MatrixXd::Zero(2 * k, 2 * k);
    op.Lambda.topRightCorner(k, k) = Mk;
    op.Lambda.bottomLeftCorner(k, k) = -Mk;
    op.weight.resize(2 * k);
    op.weight.head(k) = mu;
    op.weight.tail(k) = mu;
    return op;
}

std::vector<double> diffusion_spectrum(const ModeOperator& op) {
    const auto k = static_cast<Eigen::Index>(op.size());
    const Eigen::MatrixXd Lk = op.L.topLeftCorner(k, k);
    Eigen::VectorXd mu = op.weight.head(k);
    Eigen::VectorXd sq = mu.array().sqrt();
    Eigen::MatrixXd S =
        sq.asDiagonal() * Lk * sq.cwiseInverse().asDiagonal();
    // symmetric up to rounding; symmetrize before the solve
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
    std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + k);
    std::sort(ev.begin(), ev.end(), std::greater<double>());
    return ev;
}

std::vector<Eigen::VectorXd> kernel_vectors(const ModeOperator& op) {
    if (op.n != 1)
        return {};
    const std::size_t k = op.size();
    Eigen::VectorXd k1 = Eigen::VectorXd::Zero(2 * k), k2 = Eigen::VectorXd::Zero(2 * k);
    for (std::size_t a = 0; a < k; ++a) {
        const double v = op.nodes[a] * radial::gauss_g(op.nodes[a]);
        k1(a) = v;
        k2(k + a) = v;
    }
    return {k1, k2};
}

void project_out_kernel(const ModeOperator& op, Eigen::VectorXd& w) {
    for (const auto& kv : kernel_vectors(op))
        w -= op.dot(w, kv) / op.dot(kv, kv) * kv;
}

Eigen::VectorXd mode_vector(const ModeOperator& op, double (*f)(double), bool cosine) {
    const std::size_t k = op.size();
    Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * k);
    for (std::size_t a = 0; a < k; ++a)
        v(cosine ? a : k + a) = f(op.nodes[a]);
    return v;
}

NormHistory evolve_linear(const LinearDynamics& dyn, Eigen::VectorXd w,
                          const EvolveOptions& opts) {
    const ModeOperator& op = *dyn.op;
    const auto k2 = static_cast<Eigen::Index>(2 * op.size());

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(k2, k2);
    if (dyn.include_diffusion)
        A = op.L;
    if (dyn.inv_delta != 0.0)
        A -= dyn.inv_delta * op.Lambda;

    if (opts.project_kernel)
        project_out_kernel(op, w);

    const double dt = opts.dtau;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k2, k2);

    // stage solvers factored once; the operator is autonomous
    const double gamma = 1.0 - 0.5 * std::sqrt(2.0);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    if (opts.scheme == Scheme::sdirk2)
        lu.compute(eye - gamma * dt * A);
    else
        lu.compute(eye - 0.5 * dt * A);

    NormHistory hist;
    hist.tau.push_back(0.0);
    hist.norm.push_back(op.norm(w));
    hist.int_norm2.push_back(0.0);
    hist.int_grad2.push_back(0.0);
    const double n0 = hist.norm.front();

    double tau = 0.0, acc_n2 = 0.0, acc_g2 = 0.0;
    while (tau < opts.tau_max) {
        Eigen::VectorXd w_new;
        Eigen::VectorXd mid;
        if (opts.scheme == Scheme::sdirk2) {
            const Eigen::VectorXd s1 = lu.solve(A * w);
            const Eigen::VectorXd s2 = lu.solve(A * (w + dt * (1.0 - gamma) * s1));
            w_new = w + dt * ((1.0 - gamma) * s1 + gamma * s2);
            mid = 0.5 * (w + w_new);
        } else {
            w_new = lu.solve(w + 0.5 * dt * (A * w));
            mid = 0.5 * (w + w_new);
        }
        acc_n2 += dt * op.dot(mid, mid);
        acc_g2 += dt * op.grad_norm2(mid);
        tau += dt;
        const double nn = op.norm(w_new);
        if (nn > 10.0 * op.norm(w))
            throw StepInstability("evolve_linear: norm grew tenfold in one step");
        w = std::move(w_new);
        hist.tau.push_back(tau);
        hist.norm.push_back(nn);
        hist.int_norm2.push_back(acc_n2);
        hist.int_grad2.push_back(acc_g2);
        if (nn < opts.stop_fraction * n0)
            break;
    }
    return hist;
}

double decay_rate(const NormHistory& hist) {
    const double n0 = hist.norm.front();
    std::size_t lo = hist.norm.size(), hi = hist.norm.size();
    for (std::size_t i = 0; i < hist.norm.size(); ++i) {
        if (lo == hist.norm.size() && hist.norm[i] < 0.5 * n0)
            lo = i;
        if (hist.norm[i] < 0.01 * n0) {
            hi = i;
            break;
        }
    }
    if (lo >= hi || hi == hist.norm.size())
        throw InsufficientDecay("decay_rate: norm never spanned [0.5, 0.01] of its "
                                "initial value");
    // least squares of log norm against tau over [lo, hi]
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const auto count = static_cast<double>(hi - lo + 1);
    for (std::size_t i = lo; i <= hi; ++i) {
        const double t = hist.tau[i], y = std::log(hist.norm[i]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double slope = (count * sty - st * sy) / (count * stt - st * st);
    return -slope;
}

} // namespace vortexlab::lindyn
