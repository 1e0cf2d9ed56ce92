import java.util.Scanner;

public class Main {

    {{SUBMISSION}}

    static int[] parseIntArray(String line) {
        String body = line.trim();
        body = body.substring(1, body.length() - 1).trim();
        if (body.isEmpty()) {
            return new int[0];
        }
        String[] parts = body.split(",");
        int[] values = new int[parts.length];
        for (int i = 0; i < parts.length; i++) {
            values[i] = Integer.parseInt(parts[i].trim());
        }
        return values;
    }

    public static void main(String[] args) {
        Scanner in = new Scanner(System.in);
        int[] nums = parseIntArray(in.nextLine());
        int val = Integer.parseInt(in.nextLine().trim());
        Main solver = new Main();
        System.out.println(solver.isEverywhere(nums, val));
    }
}
