#include <exception>
#include <iostream>
#include <vector>

#include "gpop/cli.hpp"
#include "gpop/types.hpp"

// Exit codes: 0 success, 1 usage/config, 2 verification failure, 3 IO.
int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const gpop::cli::RunConfig cfg = gpop::cli::parse_args(args);
    return gpop::cli::run(cfg, std::cout);
  } catch (const gpop::cli::help_requested& help) {
    std::cout << help.text;
    return 0;
  } catch (const gpop::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const gpop::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gpop::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
