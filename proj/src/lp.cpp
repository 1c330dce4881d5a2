#include "stabeq/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace stabeq {

const char* lp_status_name(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        default: return "numerical_failure";
    }
}

int LinearProgram::add_var(double cost, double lb, double ub, const std::string& name) {
    if (lb > ub) throw std::invalid_argument("LinearProgram: lower bound above upper bound");
    c.push_back(cost);
    lo.push_back(lb);
    up.push_back(ub);
    var_names.push_back(name);
    return num_vars++;
}

void LinearProgram::add_row(SparseRow row) {
    for (auto& [j, v] : row.a) {
        (void)v;
        if (j < 0 || j >= num_vars) throw std::out_of_range("LinearProgram: bad variable index");
    }
    if (row.sense != '<' && row.sense != '=') throw std::invalid_argument("LinearProgram: bad sense");
    rows.push_back(std::move(row));
}

namespace {

constexpr double kDjTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kPivTol = 1e-10;  // pivot element threshold
constexpr double kP1Tol = 1e-9;    // phase-1 residual threshold (scaled rows)

enum VStat : uint8_t { kBasic, kAtLo, kAtUp, kFreeZero };

// Bounded-variable two-phase primal simplex on A x + s = b with a dense
// explicit basis inverse, product-form updates and periodic refactorization.
// Pricing is Dantzig, falling back to Bland's rule to guarantee termination.
class Simplex {
  public:
    explicit Simplex(const LinearProgram& lp) : lp_(lp), m_(int(lp.rows.size())), n_(lp.num_vars) {
        scale_.assign(m_, 1.0);
        for (int r = 0; r < m_; ++r) {
            double mx = 0.0;
            for (auto& [j, v] : lp_.rows[r].a) {
                (void)j;
                mx = std::max(mx, std::fabs(v));
            }
            if (mx > 0.0) scale_[r] = 1.0 / mx;
        }

        // columns: structural | slack (one per row) | artificial (one per row, maybe unused)
        nslack_ = m_;
        ntot_ = n_ + nslack_ + m_;
        cols_.assign(ntot_, {});
        lob_.assign(ntot_, 0.0);
        upb_.assign(ntot_, 0.0);
        for (int j = 0; j < n_; ++j) {
            lob_[j] = lp_.lo[j];
            upb_[j] = lp_.up[j];
        }
        for (int r = 0; r < m_; ++r) {
            for (auto& [j, v] : lp_.rows[r].a) cols_[j].push_back({r, v * scale_[r]});
            b_.push_back(lp_.rows[r].rhs * scale_[r]);
            int s = slack_col(r);
            cols_[s].push_back({r, 1.0});
            lob_[s] = 0.0;
            upb_[s] = lp_.rows[r].sense == '<' ? kInf : 0.0;
        }

        x_.assign(ntot_, 0.0);
        vstat_.assign(ntot_, kAtLo);
        for (int j = 0; j < n_; ++j) {
            if (lob_[j] <= -kInf && upb_[j] >= kInf) {
                vstat_[j] = kFreeZero;
                x_[j] = 0.0;
            } else if (lob_[j] <= -kInf) {
                vstat_[j] = kAtUp;
                x_[j] = upb_[j];
            } else if (upb_[j] >= kInf) {
                vstat_[j] = kAtLo;
                x_[j] = lob_[j];
            } else {
                vstat_[j] = std::fabs(lob_[j]) <= std::fabs(upb_[j]) ? kAtLo : kAtUp;
                x_[j] = vstat_[j] == kAtLo ? lob_[j] : upb_[j];
            }
        }
    }

    LpSolution run() {
        LpSolution out;
        // initial basis: slack where it covers the residual, artificial otherwise
        basic_.assign(m_, -1);
        VecD resid(m_);
        for (int r = 0; r < m_; ++r) {
            double ax = 0.0;
            for (auto& [j, v] : lp_.rows[r].a) ax += v * scale_[r] * x_[j];
            resid[r] = b_[r] - ax;
        }
        bool need_phase1 = false;
        for (int r = 0; r < m_; ++r) {
            int s = slack_col(r);
            if (lp_.rows[r].sense == '<' && resid[r] >= 0.0) {
                basic_[r] = s;
                vstat_[s] = kBasic;
                x_[s] = resid[r];
            } else {
                int a = art_col(r);
                double sg = resid[r] < 0.0 ? -1.0 : 1.0;
                cols_[a] = {{r, sg}};
                lob_[a] = 0.0;
                upb_[a] = kInf;
                basic_[r] = a;
                vstat_[a] = kBasic;
                x_[a] = std::fabs(resid[r]);
                art_used_.push_back(a);
                if (x_[a] > kP1Tol) need_phase1 = true;
            }
        }
        binv_.assign(size_t(m_) * m_, 0.0);
        for (int r = 0; r < m_; ++r) binv_[size_t(r) * m_ + r] = basic_[r] == art_col(r) && cols_[basic_[r]][0].second < 0 ? -1.0 : 1.0;

        cost_.assign(ntot_, 0.0);
        if (need_phase1 || !art_used_.empty()) {
            for (int a : art_used_) cost_[a] = 1.0;
            LpStatus st = iterate();
            if (st != LpStatus::optimal) {
                out.status = st == LpStatus::unbounded ? LpStatus::numerical_failure : st;
                return out;
            }
            double infeas = 0.0;
            for (int a : art_used_) infeas += x_[a];
            if (infeas > kP1Tol * std::max(1, m_)) {
                out.status = LpStatus::infeasible;
                return out;
            }
            for (int a : art_used_) {
                upb_[a] = 0.0;  // freeze artificials
                if (vstat_[a] != kBasic) x_[a] = 0.0;
            }
        }

        std::fill(cost_.begin(), cost_.end(), 0.0);
        for (int j = 0; j < n_; ++j) cost_[j] = lp_.c[j];
        LpStatus st = iterate();
        out.status = st;
        if (st != LpStatus::optimal) return out;

        out.x.assign(x_.begin(), x_.begin() + n_);
        out.objective = 0.0;
        for (int j = 0; j < n_; ++j) out.objective += lp_.c[j] * out.x[j];
        out.iterations = total_iters_;

        // duals: y_simplex = c_B' B^-1 on scaled rows; exposed multiplier is
        // -scale * y_simplex so that L = c'x + y'(Ax - b) is stationary
        VecD ys(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            double cb = cost_[basic_[r]];
            if (cb == 0.0) continue;
            const double* row = &binv_[size_t(r) * m_];
            for (int k = 0; k < m_; ++k) ys[k] += cb * row[k];
        }
        out.y.assign(m_, 0.0);
        for (int r = 0; r < m_; ++r) {
            double v = -ys[r] * scale_[r];
            if (lp_.rows[r].sense == '<' && v < 0.0 && v > -1e-7) v = 0.0;
            out.y[r] = v;
        }

        if (!post_check(out)) out.status = LpStatus::numerical_failure;
        return out;
    }

  private:
    int slack_col(int r) const { return n_ + r; }
    int art_col(int r) const { return n_ + nslack_ + r; }

    // w = B^-1 * column j
    void ftran(int j, VecD& w) const {
        std::fill(w.begin(), w.end(), 0.0);
        for (auto& [r, v] : cols_[j])
            for (int i = 0; i < m_; ++i) w[i] += binv_[size_t(i) * m_ + r] * v;
    }

    double reduced_cost(int j, const VecD& ys) const {
        double d = cost_[j];
        for (auto& [r, v] : cols_[j]) d -= ys[r] * v;
        return d;
    }

    LpStatus iterate() {
        const int bland_after = 2 * (m_ + ntot_) + 500;
        const long max_iters = 50L * (m_ + ntot_) + 20000;
        VecD ys(m_), w(m_);
        int since_refactor = 0;
        for (long it = 0;; ++it, ++total_iters_) {
            if (it > max_iters) return LpStatus::numerical_failure;
            bool bland = it > bland_after;

            std::fill(ys.begin(), ys.end(), 0.0);
            for (int r = 0; r < m_; ++r) {
                double cb = cost_[basic_[r]];
                if (cb == 0.0) continue;
                const double* row = &binv_[size_t(r) * m_];
                for (int k = 0; k < m_; ++k) ys[k] += cb * row[k];
            }

            int enter = -1, dir = 0;
            double best = kDjTol;
            for (int j = 0; j < ntot_; ++j) {
                VStat st = VStat(vstat_[j]);
                if (st == kBasic) continue;
                if (lob_[j] == upb_[j]) continue;  // fixed
                double d = reduced_cost(j, ys);
                int dj_dir = 0;
                if ((st == kAtLo || st == kFreeZero) && d < -kDjTol) dj_dir = 1;
                else if ((st == kAtUp || st == kFreeZero) && d > kDjTol) dj_dir = -1;
                if (!dj_dir) continue;
                if (bland) {
                    enter = j;
                    dir = dj_dir;
                    break;
                }
                if (std::fabs(d) > best) {
                    best = std::fabs(d);
                    enter = j;
                    dir = dj_dir;
                }
            }
            if (enter < 0) return LpStatus::optimal;

            ftran(enter, w);

            // ratio test: entering moves dir * delta >= 0, basic i moves by -dir*delta*w[i]
            double delta = upb_[enter] - lob_[enter] >= kInf ? kInf : upb_[enter] - lob_[enter];
            int leave = -1;  // -1 with finite delta => bound flip
            double leave_to = 0.0;
            for (int i = 0; i < m_; ++i) {
                double den = dir * w[i];
                int bj = basic_[i];
                double lim, to;
                if (den > kPivTol) {
                    if (lob_[bj] <= -kInf) continue;
                    lim = (x_[bj] - lob_[bj]) / den;
                    to = lob_[bj];
                } else if (den < -kPivTol) {
                    if (upb_[bj] >= kInf) continue;
                    lim = (x_[bj] - upb_[bj]) / den;
                    to = upb_[bj];
                } else {
                    continue;
                }
                if (lim < 0.0) lim = 0.0;
                bool better = lim < delta - 1e-12;
                if (!better && lim < delta + 1e-12 && leave >= 0) {
                    if (bland ? bj < basic_[leave] : std::fabs(w[i]) > std::fabs(w[leave])) better = true;
                }
                if (better) {
                    delta = lim;
                    leave = i;
                    leave_to = to;
                }
            }
            if (delta >= kInf) return LpStatus::unbounded;

            // apply step
            if (delta != 0.0) {
                for (int i = 0; i < m_; ++i)
                    if (w[i] != 0.0) x_[basic_[i]] -= dir * delta * w[i];
            }
            if (leave < 0) {  // bound flip
                x_[enter] += dir * delta;
                vstat_[enter] = dir > 0 ? kAtUp : kAtLo;
                continue;
            }
            int out_col = basic_[leave];
            x_[enter] = (vstat_[enter] == kFreeZero ? 0.0 : x_[enter]) + dir * delta;
            x_[out_col] = leave_to;
            vstat_[out_col] = upb_[out_col] == lob_[out_col] ? kAtLo
                              : (leave_to == lob_[out_col] ? kAtLo : kAtUp);
            basic_[leave] = enter;
            vstat_[enter] = kBasic;

            // product-form update of B^-1
            double piv = w[leave];
            if (std::fabs(piv) < kPivTol) return LpStatus::numerical_failure;
            double* prow = &binv_[size_t(leave) * m_];
            for (int k = 0; k < m_; ++k) prow[k] /= piv;
            for (int i = 0; i < m_; ++i) {
                if (i == leave || w[i] == 0.0) continue;
                double f = w[i];
                double* irow = &binv_[size_t(i) * m_];
                for (int k = 0; k < m_; ++k) irow[k] -= f * prow[k];
            }
            if (++since_refactor >= 256) {
                if (!refactor()) return LpStatus::numerical_failure;
                since_refactor = 0;
            }
        }
    }

    // rebuild B^-1 by Gauss-Jordan and recompute basic values
    bool refactor() {
        VecD B(size_t(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i)
            for (auto& [r, v] : cols_[basic_[i]]) B[size_t(r) * m_ + i] = v;
        VecD inv(size_t(m_) * m_, 0.0);
        for (int i = 0; i < m_; ++i) inv[size_t(i) * m_ + i] = 1.0;
        for (int col = 0; col < m_; ++col) {
            int piv = col;
            double mx = std::fabs(B[size_t(col) * m_ + col]);
            for (int r = col + 1; r < m_; ++r) {
                double v = std::fabs(B[size_t(r) * m_ + col]);
                if (v > mx) {
                    mx = v;
                    piv = r;
                }
            }
            if (mx < 1e-12) return false;
            if (piv != col) {
                for (int k = 0; k < m_; ++k) {
                    std::swap(B[size_t(piv) * m_ + k], B[size_t(col) * m_ + k]);
                    std::swap(inv[size_t(piv) * m_ + k], inv[size_t(col) * m_ + k]);
                }
            }
            double d = B[size_t(col) * m_ + col];
            for (int k = 0; k < m_; ++k) {
                B[size_t(col) * m_ + k] /= d;
                inv[size_t(col) * m_ + k] /= d;
            }
            for (int r = 0; r < m_; ++r) {
                if (r == col) continue;
                double f = B[size_t(r) * m_ + col];
                if (f == 0.0) continue;
                for (int k = 0; k < m_; ++k) {
                    B[size_t(r) * m_ + k] -= f * B[size_t(col) * m_ + k];
                    inv[size_t(r) * m_ + k] -= f * inv[size_t(col) * m_ + k];
                }
            }
        }
        binv_.swap(inv);
        VecD rhs(b_);
        for (int j = 0; j < ntot_; ++j) {
            if (vstat_[j] == kBasic || x_[j] == 0.0) continue;
            for (auto& [r, v] : cols_[j]) rhs[r] -= v * x_[j];
        }
        for (int i = 0; i < m_; ++i) {
            double xv = 0.0;
            const double* row = &binv_[size_t(i) * m_];
            for (int k = 0; k < m_; ++k) xv += row[k] * rhs[k];
            x_[basic_[i]] = xv;
        }
        return true;
    }

    bool post_check(LpSolution& out) {
        for (int j = 0; j < n_; ++j) {
            if (out.x[j] < lp_.lo[j] - 1e-7 || out.x[j] > lp_.up[j] + 1e-7) return false;
            out.x[j] = std::min(std::max(out.x[j], lp_.lo[j]), lp_.up[j]);
        }
        for (int r = 0; r < m_; ++r) {
            double ax = 0.0, mx = 1.0;
            for (auto& [j, v] : lp_.rows[r].a) {
                ax += v * out.x[j];
                mx = std::max(mx, std::fabs(v));
            }
            double resid = ax - lp_.rows[r].rhs;
            if (lp_.rows[r].sense == '<') {
                if (resid > kLpFeasTol * mx) return false;
            } else if (std::fabs(resid) > kLpFeasTol * mx) {
                return false;
            }
        }
        // Primal nondegeneracy of the final basis: every basic variable sits
        // strictly inside its bounds. That makes the optimal multipliers
        // unique, so the reported duals support envelope derivatives.
        bool nondegenerate = true;
        for (int i = 0; i < m_; ++i) {
            int j = basic_[i];
            double slack_lo = x_[j] - lob_[j], slack_up = upb_[j] - x_[j];
            double span = std::max(1.0, std::fabs(x_[j]));
            if (slack_lo < 1e-9 * span || slack_up < 1e-9 * span) {
                nondegenerate = false;
                break;
            }
        }
        out.strict_complementarity = nondegenerate;
        return true;
    }

    const LinearProgram& lp_;
    int m_, n_, nslack_ = 0, ntot_ = 0;
    VecD scale_, b_, cost_, x_, binv_;
    std::vector<std::vector<std::pair<int, double>>> cols_;
    VecD lob_, upb_;
    std::vector<uint8_t> vstat_;
    VecI basic_;
    VecI art_used_;
    int total_iters_ = 0;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
    if (lp.rows.empty()) {
        // pure bound problem
        LpSolution out;
        out.x.assign(lp.num_vars, 0.0);
        for (int j = 0; j < lp.num_vars; ++j) {
            if (lp.c[j] > 0.0) {
                if (lp.lo[j] <= -kInf) {
                    out.status = LpStatus::unbounded;
                    return out;
                }
                out.x[j] = lp.lo[j];
            } else if (lp.c[j] < 0.0) {
                if (lp.up[j] >= kInf) {
                    out.status = LpStatus::unbounded;
                    return out;
                }
                out.x[j] = lp.up[j];
            } else {
                out.x[j] = lp.lo[j] > -kInf ? lp.lo[j] : (lp.up[j] < kInf ? lp.up[j] : 0.0);
            }
            out.objective += lp.c[j] * out.x[j];
        }
        out.status = LpStatus::optimal;
        return out;
    }
    Simplex s(lp);
    return s.run();
}

bool lp_feasible(const LinearProgram& lp, VecD* point) {
    LinearProgram relaxed = lp;
    std::fill(relaxed.c.begin(), relaxed.c.end(), 0.0);
    LpSolution sol = lp_solve(relaxed);
    if (sol.status != LpStatus::optimal) return false;
    if (point) *point = sol.x;
    return true;
}

std::string lp_dump(const LinearProgram& lp) {
    auto vname = [&](int j) {
        if (j < int(lp.var_names.size()) && !lp.var_names[j].empty()) return lp.var_names[j];
        return "x" + std::to_string(j);
    };
    std::string s = "min:";
    bool first = true;
    for (int j = 0; j < lp.num_vars; ++j) {
        if (lp.c[j] == 0.0) continue;
        s += (first ? " " : " + ") + fmt_short(lp.c[j]) + " " + vname(j);
        first = false;
    }
    if (first) s += " 0";
    s += ";\n";
    for (size_t r = 0; r < lp.rows.size(); ++r) {
        s += "r" + std::to_string(r) + ":";
        first = true;
        for (auto& [j, v] : lp.rows[r].a) {
            s += (first ? " " : " + ") + fmt_short(v) + " " + vname(j);
            first = false;
        }
        if (first) s += " 0";
        s += std::string(" ") + (lp.rows[r].sense == '<' ? "<=" : "=") + " " + fmt_short(lp.rows[r].rhs) + ";\n";
    }
    for (int j = 0; j < lp.num_vars; ++j) {
        bool lb = lp.lo[j] > -kInf, ub = lp.up[j] < kInf;
        if (!lb && !ub) {
            s += vname(j) + " free;\n";
        } else if (lb && ub) {
            s += fmt_short(lp.lo[j]) + " <= " + vname(j) + " <= " + fmt_short(lp.up[j]) + ";\n";
        } else if (lb) {
            s += vname(j) + " >= " + fmt_short(lp.lo[j]) + ";\n";
        } else {
            s += vname(j) + " <= " + fmt_short(lp.up[j]) + ";\n";
        }
    }
    return s;
}

}  // namespace stabeq
