#pragma once

#include <array>

namespace proxysync {

enum class Cell : int { Empty = 0, X = 1, O = 2 };
enum class GameResult { None, X, O, Draw };

const char* cell_name(Cell c);
const char* game_result_name(GameResult r);

struct TicTacToeBoard {
  std::array<Cell, 9> cells{};  // tile-numbered 1..9, stored 0-based
  Cell next = Cell::X;
  bool operator==(const TicTacToeBoard&) const = default;
};

// Place `mark` on `cell` (1..9). Raises BadTileIndex for a cell off the
// board, CellOccupied for a taken cell, and OutOfTurn when it is not that
// mark's turn — turns are processed strictly alternating.
TicTacToeBoard ttt_apply(const TicTacToeBoard& board, int cell, Cell mark);

// Standard three-in-a-row over rows, columns and diagonals; Draw only on a
// full board with no line.
GameResult ttt_winner(const TicTacToeBoard& board);

}  // namespace proxysync
