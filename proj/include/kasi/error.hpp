/*
 * Copyright 2026 The kasi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kasi {

/**
 * Base class of every error thrown by the library.
 */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A GameGraph invariant does not hold.
class StructuralError : public Error
{
public:
    enum class Kind { ZeroOutDegree, DanglingEdge, AdjacencyMismatch };

    StructuralError(Kind kind, std::size_t index, const std::string& what)
        : Error(what), kind_(kind), index_(index) {}

    Kind kind() const noexcept { return kind_; }
    /// Offending vertex (ZeroOutDegree) or edge (DanglingEdge); 0 otherwise.
    std::size_t index() const noexcept { return index_; }

private:
    Kind kind_;
    std::size_t index_;
};

class InvalidStrategy : public Error
{
public:
    using Error::Error;
};

class EmptyKeepSet : public Error
{
public:
    EmptyKeepSet() : Error("induced subgame needs a nonempty vertex set") {}
};

/// Path-weight arithmetic would not fit the 64-bit weight type.
class OverflowRisk : public Error
{
public:
    using Error::Error;
};

/// A relaxed edge had a positive weight after potential transformation.
class PositiveTransformedEdge : public Error
{
public:
    PositiveTransformedEdge(std::size_t edge, const std::string& what) : Error(what), edge_(edge) {}
    std::size_t edge() const noexcept { return edge_; }

private:
    std::size_t edge_;
};

/// Entry condition (i) or (ii) of strategy evaluation is violated.
class PreconditionViolated : public Error
{
public:
    PreconditionViolated(int condition, const std::string& what) : Error(what), condition_(condition) {}
    /// 1 for the cycle condition, 2 for the edge-consistency condition.
    int condition() const noexcept { return condition_; }

private:
    int condition_;
};

/// A solver invariant (descent, iteration budget, candidate-set monotonicity) broke.
class InternalError : public Error
{
public:
    using Error::Error;
};

class BudgetExceeded : public Error
{
public:
    BudgetExceeded(std::size_t required, std::size_t budget, const std::string& what)
        : Error(what), required_(required), budget_(budget) {}
    std::size_t required() const noexcept { return required_; }
    std::size_t budget() const noexcept { return budget_; }

private:
    std::size_t required_;
    std::size_t budget_;
};

class WitnessIncomplete : public Error
{
public:
    using Error::Error;
};

class InvalidSpec : public Error
{
public:
    using Error::Error;
};

class TimeLimitExceeded : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}
    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

} // namespace kasi
