#pragma once

#include <cstdint>
#include <string_view>

#include <Eigen/Core>

namespace csfs {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// n x m matrix of labels in {-1, +1}.
using LabelMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

enum class Task { Binary, MultiClass, MultiLabel };

const char* to_string(Task task) noexcept;
Task parse_task(std::string_view name);

}  // namespace csfs
