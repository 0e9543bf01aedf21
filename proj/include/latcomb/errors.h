// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Exception types. The CLI maps these onto exit codes: ContractError,
// StructuralError and ParseError exit with 2, NoPathError with 3.

#ifndef LATCOMB_ERRORS_H_
#define LATCOMB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace latcomb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by its arguments.
class ContractError : public Error {
 public:
  using Error::Error;
};

// A machine references a state that does not exist, or is otherwise
// malformed.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// No complete path from the initial state to a final state.
class NoPathError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. The message is prefixed with "file:line: ".
class ParseError : public Error {
 public:
  ParseError(const std::string &file, int line, const std::string &what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(file),
        line_(line) {}

  const std::string &file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

}  // namespace latcomb

#endif  // LATCOMB_ERRORS_H_
