#pragma once

#include <vector>

namespace rover::harness {

double mean(const std::vector<double>& v);
double median(std::vector<double> v);  // by value: partial-sorts a copy
double rms(const std::vector<double>& v);

/// Two-sample Kolmogorov-Smirnov test p-value (asymptotic).
double ks_test_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace rover::harness
