#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "kenli/nn.hpp"

namespace kenli {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(const std::vector<Param*>& params, AdamConfig cfg = {}) : cfg_(cfg) {
    m_.reserve(params.size());
    v_.reserve(params.size());
    for (const Param* p : params) {
      m_.emplace_back(p->w.r, p->w.c);
      v_.emplace_back(p->w.r, p->w.c);
    }
  }

  // One update from the gradients currently accumulated in params[i]->g.
  void step(const std::vector<Param*>& params) {
    if (params.size() != m_.size())
      throw std::logic_error("optimizer/parameter count mismatch");
    ++t_;
    double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      Param& p = *params[i];
      for (std::size_t k = 0; k < p.w.size(); ++k) {
        double g = p.g.a[k];
        m_[i].a[k] = cfg_.beta1 * m_[i].a[k] + (1.0 - cfg_.beta1) * g;
        v_[i].a[k] = cfg_.beta2 * v_[i].a[k] + (1.0 - cfg_.beta2) * g * g;
        double mhat = m_[i].a[k] / bc1;
        double vhat = v_[i].a[k] / bc2;
        p.w.a[k] -= cfg_.lr * mhat / (std::sqrt(vhat) + cfg_.eps);
      }
    }
  }

  std::size_t steps() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<Mat> m_, v_;
  std::size_t t_ = 0;
};

}  // namespace kenli
